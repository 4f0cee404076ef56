#pragma once

#include "pillai/error.hpp"
#include "pillai/linalg.hpp"
#include "pillai/regression.hpp"
#include "pillai/manova.hpp"
#include "pillai/inference.hpp"
#include "pillai/random.hpp"
#include "pillai/montecarlo.hpp"
#include "pillai/dataset.hpp"
#include "pillai/report.hpp"
#include "pillai/commands.hpp"
