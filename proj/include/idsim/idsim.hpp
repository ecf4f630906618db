#pragma once

// Umbrella header: anomaly detection for system-call count matrices via a
// bounded Gaussian similarity, k-means clustering under that similarity,
// scalar feature reduction and nearest-neighbor classification.

#include "idsim/case_study.hpp"
#include "idsim/classify.hpp"
#include "idsim/dataset.hpp"
#include "idsim/error.hpp"
#include "idsim/kmeans.hpp"
#include "idsim/model_io.hpp"
#include "idsim/reduce.hpp"
#include "idsim/reproduce.hpp"
#include "idsim/similarity.hpp"
#include "idsim/vocabulary.hpp"
