#pragma once

#include "rmxlab/chaotic_maps.hpp"
#include "rmxlab/config.hpp"
#include "rmxlab/core.hpp"
#include "rmxlab/ensemble_spec.hpp"
#include "rmxlab/ensembles.hpp"
#include "rmxlab/entanglement.hpp"
#include "rmxlab/parallel.hpp"
#include "rmxlab/pr_circuits.hpp"
#include "rmxlab/rng.hpp"
#include "rmxlab/spectral_stats.hpp"
#include "rmxlab/sweep.hpp"
