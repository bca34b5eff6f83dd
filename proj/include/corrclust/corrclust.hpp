#pragma once

#include "corrclust/classify.hpp"
#include "corrclust/error.hpp"
#include "corrclust/instance.hpp"
#include "corrclust/learn.hpp"
#include "corrclust/metrics.hpp"
#include "corrclust/partition.hpp"
#include "corrclust/reports.hpp"
#include "corrclust/rng.hpp"
#include "corrclust/solver.hpp"
#include "corrclust/synth.hpp"
#include "corrclust/text_io.hpp"
