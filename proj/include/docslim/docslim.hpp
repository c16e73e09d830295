// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "docslim/aps.hpp"
#include "docslim/bench.hpp"
#include "docslim/dts.hpp"
#include "docslim/errors.hpp"
#include "docslim/flexres.hpp"
#include "docslim/image.hpp"
#include "docslim/imgproc.hpp"
#include "docslim/parallel.hpp"
#include "docslim/png_io.hpp"
#include "docslim/rng.hpp"
#include "docslim/synthcorpus.hpp"
#include "docslim/tokens.hpp"
