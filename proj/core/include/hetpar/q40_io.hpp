// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "hetpar/kernels.hpp"

namespace hetpar {

// Q40 weight file: magic "Q40W", rows (u32 LE), cols (u32 LE), then blocks in
// row-major group order, 18 bytes each.
void save_q40(const std::filesystem::path& path, const Q40Weight& w);
Q40Weight load_q40(const std::filesystem::path& path);

}  // namespace hetpar
