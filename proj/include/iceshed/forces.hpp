#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "iceshed/mesh.hpp"
#include "iceshed/mesh_io.hpp"
#include "iceshed/partition.hpp"
#include "iceshed/strength.hpp"

namespace iceshed {

/// Sum over the piece's (clipped) elements of m_i * omega^2 * r_i, where r_i
/// is the span coordinate of the clipped element's centroid. Newtons.
inline double centrifugal_force(const PieceDecomposition& piece, double omega, double density,
                                Vec3 axis = {0.0, 0.0, 1.0}) {
  double first_moment = 0.0;  // sum of V_i * r_i
  for (const auto& e : piece.elements) first_moment += e.volume * dot(e.centroid, axis);
  return density * first_moment * (omega * omega);
}

inline double cohesion_force(double cut_area, double sigma_c) { return sigma_c * cut_area; }

inline double adhesion_force(const PieceDecomposition& piece, double tau_a) {
  double f = 0.0;
  for (const auto& a : piece.adhesion) f += tau_a * a.area;
  return f;
}

/// Forces at one cutting plane: centrifugal and adhesion accumulated over
/// all ice tipward of z, cohesion across the cut at z.
struct ForceSample {
  double z = 0.0;
  double centrifugal = 0.0;
  double cohesion = 0.0;
  double adhesion = 0.0;
};

struct ForceCurve {
  std::vector<ForceSample> samples;  // ordered by z
  double omega = 0.0;
  double temperature = 0.0;
};

/// Tipward contributions already accounted for outside a partition.
struct TipwardLoad {
  double centrifugal = 0.0;
  double adhesion = 0.0;
  double mass = 0.0;
};

/// Per-plane samples from a partition. The last piece (tipward of the last
/// plane) is replaced by `beyond` when `include_tip_piece` is false.
inline std::vector<ForceSample> cumulative_samples(const Partition& part, double omega,
                                                   double density, Vec3 axis, double sigma_c,
                                                   double tau_a, TipwardLoad beyond = {},
                                                   bool include_tip_piece = true) {
  const std::size_t n = part.planes.size();
  std::vector<ForceSample> out(n);
  double fc = beyond.centrifugal;
  double fa = beyond.adhesion;
  if (include_tip_piece) {
    fc += centrifugal_force(part.pieces[n], omega, density, axis);
    fa += adhesion_force(part.pieces[n], tau_a);
  }
  for (std::size_t k = n; k-- > 0;) {
    out[k] = {part.planes[k], fc, cohesion_force(part.cut_area[k], sigma_c), fa};
    fc += centrifugal_force(part.pieces[k], omega, density, axis);
    fa += adhesion_force(part.pieces[k], tau_a);
  }
  return out;
}

inline ForceCurve force_profile(const IceMesh& mesh, std::span<const double> planes, double omega,
                                double sigma_c, double tau_a) {
  const auto part = partition(mesh, planes);
  ForceCurve curve;
  curve.omega = omega;
  curve.samples =
      cumulative_samples(part, omega, mesh.density(), mesh.span_axis(), sigma_c, tau_a);
  return curve;
}

inline ForceCurve force_profile(const IceMesh& mesh, std::span<const double> planes, double omega,
                                const StrengthModel& model, double temperature) {
  auto curve = force_profile(mesh, planes, omega, model.cohesion_strength(temperature),
                             model.adhesion_strength(temperature));
  curve.temperature = temperature;
  return curve;
}

inline void write_csv(std::ostream& out, const ForceCurve& curve) {
  out << "z_m,F_centrifugal_N,F_cohesion_N,F_adhesion_N\n";
  for (const auto& s : curve.samples) {
    out << detail::format_double(s.z) << ',' << detail::format_double(s.centrifugal) << ','
        << detail::format_double(s.cohesion) << ',' << detail::format_double(s.adhesion) << '\n';
  }
}

}  // namespace iceshed
