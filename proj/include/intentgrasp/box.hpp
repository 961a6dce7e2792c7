// Copyright 2026 The IntentGrasp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace intentgrasp {

/// Axis-aligned image region <x1, y1, x2, y2>, origin top-left. Pixel
/// membership is half-open: a pixel (u, v) is inside when x1 <= u < x2 and
/// y1 <= v < y2.
template <typename Scalar>
struct Box {
  Scalar x1{};
  Scalar y1{};
  Scalar x2{};
  Scalar y2{};

  Scalar width() const { return x2 - x1; }
  Scalar height() const { return y2 - y1; }
  Scalar area() const { return width() * height(); }
  bool valid() const { return x2 > x1 && y2 > y1; }

  bool within(Scalar image_width, Scalar image_height) const {
    return x1 >= Scalar(0) && y1 >= Scalar(0) && x2 <= image_width &&
           y2 <= image_height;
  }

  template <typename T>
  bool contains_pixel(T u, T v) const {
    return Scalar(u) >= x1 && Scalar(u) < x2 && Scalar(v) >= y1 &&
           Scalar(v) < y2;
  }

  double center_x() const { return 0.5 * (double(x1) + double(x2)); }
  double center_y() const { return 0.5 * (double(y1) + double(y2)); }

  std::array<Scalar, 4> as_array() const { return {x1, y1, x2, y2}; }

  template <typename T>
  Box<T> cast() const {
    return {T(x1), T(y1), T(x2), T(y2)};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

using RegionBox = Box<double>;

/// Intersection-over-union of two axis-aligned boxes; 0 when disjoint.
template <typename Scalar>
double iou(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const Scalar ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= Scalar(0) || ih <= Scalar(0)) return 0.0;
  const Scalar inter = iw * ih;
  const Scalar uni = a.area() + b.area() - inter;
  if (uni <= Scalar(0)) return 0.0;
  return double(inter) / double(uni);
}

/// Integer bin in [0, 999] used for the discretized coordinate space.
using QuantizedBox = std::array<int, 4>;

inline int quantize_coordinate(double value, double extent) {
  const double bin = std::floor(value / extent * 1000.0);
  return static_cast<int>(std::clamp(bin, 0.0, 999.0));
}

/// Bin-center coordinate for a quantized value.
inline double dequantize_coordinate(int bin, double extent) {
  return (double(bin) + 0.5) * extent / 1000.0;
}

inline QuantizedBox quantize_box(const RegionBox& box, double width,
                                 double height) {
  return {quantize_coordinate(box.x1, width),
          quantize_coordinate(box.y1, height),
          quantize_coordinate(box.x2, width),
          quantize_coordinate(box.y2, height)};
}

inline RegionBox dequantize_box(const QuantizedBox& q, double width,
                                double height) {
  return {dequantize_coordinate(q[0], width),
          dequantize_coordinate(q[1], height),
          dequantize_coordinate(q[2], width),
          dequantize_coordinate(q[3], height)};
}

}  // namespace intentgrasp
