#pragma once

// Umbrella header: fixed-point solvers for enriched contractions in
// quasi-normed spaces, with empirical axiom checks and a config-driven
// experiment runner.

#include "quasifix/enrichment.hpp"
#include "quasifix/errors.hpp"
#include "quasifix/experiment.hpp"
#include "quasifix/expression.hpp"
#include "quasifix/map.hpp"
#include "quasifix/norm_checks.hpp"
#include "quasifix/quasi_norm.hpp"
#include "quasifix/sampling.hpp"
#include "quasifix/serialize.hpp"
#include "quasifix/solver.hpp"
#include "quasifix/vec.hpp"
