#pragma once

#include "dispvo/checkpoint.hpp"
#include "dispvo/dataset.hpp"
#include "dispvo/disparity.hpp"
#include "dispvo/errors.hpp"
#include "dispvo/eval.hpp"
#include "dispvo/kitti_io.hpp"
#include "dispvo/loss.hpp"
#include "dispvo/network.hpp"
#include "dispvo/optim.hpp"
#include "dispvo/pose.hpp"
#include "dispvo/report.hpp"
#include "dispvo/svg_plot.hpp"
#include "dispvo/synth.hpp"
#include "dispvo/train.hpp"
