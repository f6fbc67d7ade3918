#include "kdr/synthdata.hpp"

#include <cmath>
#include <numbers>

#include "kdr/errors.hpp"
#include "kdr/rng.hpp"

namespace kdr {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spec(const SynthSpec& spec) {
  if (spec.n_per_class == 0)
    raise(ErrorCode::InvalidArgument, "n_per_class must be positive");
  if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.noise_sd))
    raise(ErrorCode::InvalidArgument, "noise_sd must be a nonnegative finite value");
}

// Uniform direction on the unit sphere via a normalized Gaussian triple.
void unit_direction(CounterRng& rng, double out[3]) {
  double norm = 0.0;
  do {
    for (int i = 0; i < 3; ++i) out[i] = rng.next_normal();
    norm = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
  } while (norm < 1e-12);
  for (int i = 0; i < 3; ++i) out[i] /= norm;
}

Dataset gen_wine_chocolate(const SynthSpec& spec) {
  const std::size_t n = spec.n_per_class;
  Dataset ds;
  ds.X = Matrix(2 * n, 3);
  ds.y.resize(2 * n);
  ds.feature_names = {"f0", "f1", "f2"};
  CounterRng rng(spec.seed);
  const double radii[2] = {1.0, 3.0};
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = std::size_t(c) * n + i;
      double dir[3];
      unit_direction(rng, dir);
      for (int k = 0; k < 3; ++k)
        ds.X(row, std::size_t(k)) =
            radii[c] * dir[k] + spec.noise_sd * rng.next_normal();
      ds.y[row] = c;
    }
  return ds;
}

Dataset gen_apple_tart(const SynthSpec& spec) {
  const std::size_t n = spec.n_per_class;
  Dataset ds;
  ds.X = Matrix(4 * n, 2);
  ds.y.resize(4 * n);
  ds.feature_names = {"f0", "f1"};
  CounterRng rng(spec.seed);
  const double bands[4][2] = {{0.0, 1.0}, {1.5, 2.5}, {3.0, 4.0}, {4.5, 5.5}};
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = std::size_t(c) * n + i;
      const double lo = bands[c][0];
      const double hi = bands[c][1];
      const double radius = lo + (hi - lo) * rng.next_double();
      const double angle = 2.0 * kPi * rng.next_double();
      const double noisy = radius + spec.noise_sd * rng.next_normal();
      ds.X(row, 0) = noisy * std::cos(angle);
      ds.X(row, 1) = noisy * std::sin(angle);
      ds.y[row] = c;
    }
  return ds;
}

Dataset gen_swiss_roll(const SynthSpec& spec) {
  const std::size_t n = spec.n_per_class;
  Dataset ds;
  ds.X = Matrix(4 * n, 3);
  ds.y.resize(4 * n);
  ds.feature_names = {"f0", "f1", "f2"};
  CounterRng rng(spec.seed);
  const double t_lo = 1.5 * kPi;
  const double t_hi = 4.5 * kPi;
  const double band = (t_hi - t_lo) / 4.0;
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = std::size_t(c) * n + i;
      const double t = t_lo + band * (double(c) + rng.next_double());
      const double h = 10.0 * rng.next_double();
      ds.X(row, 0) = t * std::cos(t) + spec.noise_sd * rng.next_normal();
      ds.X(row, 1) = h + spec.noise_sd * rng.next_normal();
      ds.X(row, 2) = t * std::sin(t) + spec.noise_sd * rng.next_normal();
      ds.y[row] = c;
    }
  return ds;
}

}  // namespace

std::string synth_name(SynthDataset d) {
  switch (d) {
    case SynthDataset::wine_chocolate: return "wine_chocolate";
    case SynthDataset::apple_tart: return "apple_tart";
    case SynthDataset::swiss_roll: return "swiss_roll";
  }
  raise(ErrorCode::InvalidArgument, "unknown dataset enum value");
}

SynthDataset synth_from_name(const std::string& name) {
  if (name == "wine_chocolate") return SynthDataset::wine_chocolate;
  if (name == "apple_tart") return SynthDataset::apple_tart;
  if (name == "swiss_roll") return SynthDataset::swiss_roll;
  raise(ErrorCode::InvalidArgument, "unknown dataset name: " + name);
}

std::size_t synth_num_classes(SynthDataset d) {
  return d == SynthDataset::wine_chocolate ? 2 : 4;
}

std::size_t synth_num_features(SynthDataset d) {
  return d == SynthDataset::apple_tart ? 2 : 3;
}

Dataset generate(const SynthSpec& spec) {
  check_spec(spec);
  switch (spec.dataset) {
    case SynthDataset::wine_chocolate: return gen_wine_chocolate(spec);
    case SynthDataset::apple_tart: return gen_apple_tart(spec);
    case SynthDataset::swiss_roll: return gen_swiss_roll(spec);
  }
  raise(ErrorCode::InvalidArgument, "unknown dataset enum value");
}

}  // namespace kdr
