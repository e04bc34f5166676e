#pragma once

#include "pedtrack/calibration.hpp"
#include "pedtrack/config.hpp"
#include "pedtrack/detection.hpp"
#include "pedtrack/error.hpp"
#include "pedtrack/evaluation.hpp"
#include "pedtrack/frame_io.hpp"
#include "pedtrack/kinematics.hpp"
#include "pedtrack/output.hpp"
#include "pedtrack/pipeline.hpp"
#include "pedtrack/synth.hpp"
#include "pedtrack/tracking.hpp"
