#pragma once

#include <cstdint>
#include <string>

#include "kdr/dataset.hpp"

namespace kdr {

enum class SynthDataset { wine_chocolate, apple_tart, swiss_roll };

std::string synth_name(SynthDataset d);
SynthDataset synth_from_name(const std::string& name);  // InvalidArgument on unknown

// Generation is a pure function of this record: the same spec always yields a
// bit-identical dataset, independent of platform or thread count.
struct SynthSpec {
  SynthDataset dataset = SynthDataset::wine_chocolate;
  std::size_t n_per_class = 300;
  double noise_sd = 0.1;
  std::uint64_t seed = 0;
};

// Datasets:
//   wine_chocolate — 3-D, 2 classes. Class 0 uniform on the sphere surface of
//     radius 1, class 1 uniform on the sphere surface of radius 3; isotropic
//     Gaussian noise with standard deviation noise_sd added to every
//     coordinate.
//   apple_tart — 2-D, 4 classes. Concentric annuli with radius bands
//     [0,1), [1.5,2.5), [3,4), [4.5,5.5); the angle is uniform on [0,2pi) and
//     Gaussian noise with standard deviation noise_sd is added to the radius.
//   swiss_roll — 3-D, 4 classes. Points (t cos t, h, t sin t) with t uniform
//     on [1.5pi, 4.5pi] and h uniform on [0,10); classes are the four equal
//     t-bands (quartiles of the t range); isotropic Gaussian noise added to
//     every coordinate.
// Rows are emitted class by class (labels 0..C-1), n_per_class rows each.
// Throws InvalidArgument for n_per_class == 0 or negative/non-finite noise_sd.
Dataset generate(const SynthSpec& spec);

std::size_t synth_num_classes(SynthDataset d);
std::size_t synth_num_features(SynthDataset d);

}  // namespace kdr
