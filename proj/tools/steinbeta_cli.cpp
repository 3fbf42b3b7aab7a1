#include "steinbeta/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace cli = steinbeta::cli;

namespace {

void add_family_params(CLI::App* sub, cli::RunConfig& cfg, const std::string& families)
{
    sub->add_option("--family", cfg.family, "Law family: " + families)->capture_default_str();
    sub->add_option("--alpha", cfg.alpha, "Initial white balls (urn, integer) or first Beta shape (decimal)")
        ->capture_default_str();
    sub->add_option("--beta", cfg.beta, "Initial black balls (urn, integer) or second Beta shape (decimal)")
        ->capture_default_str();
    sub->add_option("--m", cfg.m, "Balls added per draw (urn)")->capture_default_str();
}

int write_document(const cli::RunConfig& cfg, const std::string& doc)
{
    const auto dest = cli::output_destination(cfg, std::getenv("STEINBETA_OUTPUT_DIR"));
    if (!dest) {
        std::cout << doc;
        std::cout.flush();
        return std::cout ? cli::exit_ok : cli::exit_io;
    }
    std::ofstream out(*dest, std::ios::binary);
    out << doc;
    out.close();
    if (!out) {
        std::cerr << "cannot write " << dest->string() << "\n";
        return cli::exit_io;
    }
    return cli::exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    cli::RunConfig cfg;
    CLI::App app{"Stein-method numerics for Polya urns and the Arcsine walk"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML or INI file with option defaults; flags given on the command line win");

    const std::map<std::string, cli::Format> formats{{"csv", cli::Format::csv}, {"json", cli::Format::json}};
    app.add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description("{csv, json}"))
        ->default_str("csv");
    app.add_option("--output", cfg.output_path,
                   "Output file; defaults to $STEINBETA_OUTPUT_DIR/<command>.<format>, then stdout");
    app.add_option("--seed", cfg.seed, "Seed for every random draw")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads for sweeps (0 = number of cores)")->capture_default_str();

    auto* pmf = app.add_subcommand("pmf", "Exact law of S_n (urn) or L_2n / 2 (walk)");
    add_family_params(pmf, cfg, "urn, walk");
    pmf->add_option("--n", cfg.n, "Draws (urn) or half-length (walk)")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Empirical law from seeded simulation");
    add_family_params(simulate, cfg, "urn, walk");
    simulate->add_option("--n", cfg.n, "Draws (urn) or half-length (walk)")->capture_default_str();
    simulate->add_option("--draws", cfg.draws, "Number of simulated runs")->capture_default_str();

    auto* stein = app.add_subcommand("stein-solve", "Solve the Beta Stein equation on a clustered grid");
    add_family_params(stein, cfg, "beta, urn (uses alpha/m, beta/m)");
    stein->add_option("--test", cfg.test,
                      "Test function: identity, parabola, half-square, distance:<c>, sine:<k>, constant:<c>")
        ->capture_default_str();
    stein->add_option("--grid-size", cfg.grid_size, "Grid points (>= 16)")->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "Derivative constants b0, b1 and the distance bounds");
    add_family_params(bounds, cfg, "beta, urn, walk");
    bounds->add_option("--n", cfg.n, "Draws (urn) or half-length (walk)")->capture_default_str();
    bounds->add_flag("--usage", cfg.usage,
                     "Also report the largest fraction of each sup-norm bound used by the standard test family");
    bounds->add_option("--grid-size", cfg.grid_size, "Grid points for --usage")->capture_default_str();

    auto* distance = app.add_subcommand("distance", "Exact Wasserstein distance with its bounds");
    add_family_params(distance, cfg, "urn, walk");
    distance->add_option("--n", cfg.n, "Draws (urn) or half-length (walk)")->capture_default_str();
    distance->add_option("--mc-points", cfg.mc_points, "Also report a stratified grid estimate with this many points")
        ->capture_default_str();

    auto* rate = app.add_subcommand("rate-table", "Distance and bounds for a strictly increasing list of n");
    add_family_params(rate, cfg, "urn, walk");
    rate->add_option("--n", cfg.n_list, "Comma-separated n values")->delimiter(',')->required();

    auto* verify = app.add_subcommand("verify", "Run the invariant suites and report residuals");
    verify->add_option("--suite", cfg.suite, "all, special_functions, distributions, stein_discrete, stein_beta, wasserstein")
        ->capture_default_str();
    verify->add_option("--grid-size", cfg.grid_size, "Stein grid size used by the suites")->default_val(512);

    const std::pair<CLI::App*, cli::Command> commands[] = {
        {pmf, cli::Command::pmf},           {simulate, cli::Command::simulate},
        {stein, cli::Command::stein_solve}, {bounds, cli::Command::bounds},
        {distance, cli::Command::distance}, {rate, cli::Command::rate_table},
        {verify, cli::Command::verify},
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_invalid;
    }
    for (const auto& [sub, command] : commands) {
        if (sub->parsed()) {
            cfg.command = command;
        }
    }

    const cli::RunResult result = cli::run(cfg, std::cerr);
    if (result.exit_code == cli::exit_invalid || result.exit_code == cli::exit_numerical) {
        return result.exit_code;
    }
    const int written = write_document(cfg, result.document);
    return written != cli::exit_ok ? written : result.exit_code;
}
