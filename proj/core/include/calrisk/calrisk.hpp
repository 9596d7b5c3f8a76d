#pragma once

#include "calrisk/binning.hpp"
#include "calrisk/core.hpp"
#include "calrisk/errors.hpp"
#include "calrisk/estimator.hpp"
#include "calrisk/io.hpp"
#include "calrisk/kde.hpp"
#include "calrisk/kernels.hpp"
#include "calrisk/kkr.hpp"
#include "calrisk/pipeline.hpp"
#include "calrisk/report.hpp"
#include "calrisk/risk.hpp"
#include "calrisk/sim.hpp"
