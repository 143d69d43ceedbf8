// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "boxaug/augment.hpp"
#include "boxaug/config.hpp"
#include "boxaug/error.hpp"
#include "boxaug/eval.hpp"
#include "boxaug/geometry.hpp"
#include "boxaug/kitti_io.hpp"
#include "boxaug/mask.hpp"
#include "boxaug/pipeline.hpp"
#include "boxaug/png.hpp"
#include "boxaug/preview.hpp"
#include "boxaug/random.hpp"
#include "boxaug/types.hpp"
