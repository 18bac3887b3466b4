#pragma once

#include "bayeslms/baselines.hpp"
#include "bayeslms/exact.hpp"
#include "bayeslms/experiment.hpp"
#include "bayeslms/klproj.hpp"
#include "bayeslms/metrics.hpp"
#include "bayeslms/model.hpp"
#include "bayeslms/problms.hpp"
#include "bayeslms/rng.hpp"
#include "bayeslms/synth.hpp"
