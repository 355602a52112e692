// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "musicnd/core/model.hpp"
#include "musicnd/core/multi_index.hpp"
#include "musicnd/core/noise.hpp"
#include "musicnd/core/random.hpp"
#include "musicnd/core/supports.hpp"
#include "musicnd/core/torus.hpp"
