#pragma once

#include "rng.hpp"
#include "digraph.hpp"
#include "degree.hpp"
#include "motif_catalog.hpp"
#include "generator.hpp"
#include "baselines.hpp"
#include "metrics.hpp"
#include "stats.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"
#include "experiments.hpp"
#include "report.hpp"
