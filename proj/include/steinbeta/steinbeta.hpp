#pragma once

#include "steinbeta/discrete_law.hpp"
#include "steinbeta/distributions.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/format.hpp"
#include "steinbeta/io.hpp"
#include "steinbeta/quadrature.hpp"
#include "steinbeta/special_functions.hpp"
#include "steinbeta/stein_beta.hpp"
#include "steinbeta/stein_discrete.hpp"
#include "steinbeta/verify.hpp"
#include "steinbeta/wasserstein.hpp"
