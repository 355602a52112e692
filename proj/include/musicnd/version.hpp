// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace musicnd {

inline constexpr const char* kVersion = "musicnd 0.1.0";

}  // namespace musicnd
