#pragma once

// Umbrella header.

#include "mpslime/classifier.hpp"
#include "mpslime/clique_sampler.hpp"
#include "mpslime/error.hpp"
#include "mpslime/explain.hpp"
#include "mpslime/image.hpp"
#include "mpslime/image_io.hpp"
#include "mpslime/mask.hpp"
#include "mpslime/metrics.hpp"
#include "mpslime/overlay.hpp"
#include "mpslime/perturbation.hpp"
#include "mpslime/region_graph.hpp"
#include "mpslime/remote_classifier.hpp"
#include "mpslime/report.hpp"
#include "mpslime/segmentation.hpp"
#include "mpslime/surrogate.hpp"
