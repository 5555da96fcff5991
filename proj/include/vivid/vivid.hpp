/*
 * Copyright 2026 The vivid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "vivid/color.hpp"
#include "vivid/common.hpp"
#include "vivid/csv.hpp"
#include "vivid/dataset.hpp"
#include "vivid/geometry.hpp"
#include "vivid/io.hpp"
#include "vivid/models/bagged_trees.hpp"
#include "vivid/models/fit.hpp"
#include "vivid/models/knn.hpp"
#include "vivid/models/linear.hpp"
#include "vivid/models/subprocess.hpp"
#include "vivid/pdp.hpp"
#include "vivid/predictor.hpp"
#include "vivid/render.hpp"
#include "vivid/seriation.hpp"
#include "vivid/svg.hpp"
#include "vivid/vivi.hpp"
#include "vivid/vivi_matrix.hpp"
#include "vivid/zenpath.hpp"
