/**
 * @file hpceff.hpp
 * @brief Umbrella header.
 */
#pragma once

#include "hpceff/classification.hpp"
#include "hpceff/energy.hpp"
#include "hpceff/error.hpp"
#include "hpceff/format.hpp"
#include "hpceff/metrics.hpp"
#include "hpceff/microbench.hpp"
#include "hpceff/peaks.hpp"
#include "hpceff/report.hpp"
#include "hpceff/scaling.hpp"
#include "hpceff/synth.hpp"
#include "hpceff/trace.hpp"
#include "hpceff/trace_io.hpp"
