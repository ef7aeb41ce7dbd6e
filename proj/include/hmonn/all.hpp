#pragma once

#include "hmonn/cross_validation.hpp"
#include "hmonn/datagen.hpp"
#include "hmonn/dataset.hpp"
#include "hmonn/encoding.hpp"
#include "hmonn/error.hpp"
#include "hmonn/folds.hpp"
#include "hmonn/hmonn.hpp"
#include "hmonn/impute.hpp"
#include "hmonn/io.hpp"
#include "hmonn/metrics.hpp"
#include "hmonn/mlp.hpp"
#include "hmonn/naive.hpp"
#include "hmonn/parallel.hpp"
#include "hmonn/relation_index.hpp"
#include "hmonn/seed.hpp"
#include "hmonn/wilcoxon.hpp"
