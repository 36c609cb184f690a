/*
 * Copyright 2026 The Trident Authors.
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

#include "trident/linear/layout.hpp"

#include <algorithm>
#include <string>

#include "trident/common/error.hpp"

namespace trident::linear {

PackedLayout PackedLayout::make(int channels, int width, std::size_t row) {
  if (channels <= 0 || width <= 0) throw ParameterError("layout: empty image");
  const std::size_t plane = static_cast<std::size_t>(width) * width;
  if (plane > row) {
    throw ParameterError("layout: a " + std::to_string(width) + "x" + std::to_string(width) +
                         " plane exceeds the row capacity " + std::to_string(row));
  }
  PackedLayout l;
  l.channels = channels;
  l.width = width;
  l.row = row;
  l.per_ct = static_cast<int>(row / plane);
  return l;
}

std::vector<SlotVector> pack_input(std::span<const std::uint64_t> values, const PackedLayout& layout,
                                   std::size_t n) {
  if (values.size() != layout.channels * layout.plane()) {
    throw ParameterError("pack_input: value count does not match layout");
  }
  if (n != 2 * layout.row) throw ParameterError("pack_input: ring degree does not match layout");
  std::vector<SlotVector> out(layout.num_cts(), SlotVector{std::vector<std::uint64_t>(n, 0)});
  for (int c = 0; c < layout.channels; ++c) {
    for (int y = 0; y < layout.width; ++y) {
      for (int x = 0; x < layout.width; ++x) {
        out[layout.ct_of(c)].values[layout.slot(c, y, x)] =
            values[(static_cast<std::size_t>(c) * layout.width + y) * layout.width + x];
      }
    }
  }
  return out;
}

std::vector<std::uint64_t> unpack(const std::vector<SlotVector>& slots, const PackedLayout& layout) {
  if (slots.size() != static_cast<std::size_t>(layout.num_cts())) {
    throw ParameterError("unpack: ciphertext count does not match layout");
  }
  std::vector<std::uint64_t> out(layout.channels * layout.plane());
  for (int c = 0; c < layout.channels; ++c) {
    for (int y = 0; y < layout.width; ++y) {
      for (int x = 0; x < layout.width; ++x) {
        out[(static_cast<std::size_t>(c) * layout.width + y) * layout.width + x] =
            slots[layout.ct_of(c)].values[layout.slot(c, y, x)];
      }
    }
  }
  return out;
}

SlotVector pack_replicated(std::span<const std::uint64_t> values, std::size_t period,
                           std::size_t n) {
  const std::size_t row = n / 2;
  if (period == 0 || row % period != 0 || values.size() > period) {
    throw ParameterError("pack_replicated: period must divide the row and hold the vector");
  }
  SlotVector out{std::vector<std::uint64_t>(n, 0)};
  for (std::size_t j = 0; j < row; ++j) {
    const std::size_t i = j % period;
    out.values[j] = i < values.size() ? values[i] : 0;
  }
  return out;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace trident::linear
