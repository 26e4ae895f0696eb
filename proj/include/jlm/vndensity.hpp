#pragma once

// Von Neumann Gamma-dimensions and Gamma-densities: covolume times formal
// degree for square-integrable representations, covolume times Plancherel
// density along continuous families.

#include <string>
#include <vector>

#include "jlm/adelic.hpp"
#include "jlm/localgeom.hpp"
#include "jlm/plancherel.hpp"
#include "jlm/symexpr.hpp"

namespace jlm::vndensity {

using adelic::CheckResult;
using adelic::Verdict;
using plancherel::FormalDegree;
using symexpr::NumericValue;
using symexpr::SymbolicScalar;

struct LatticeDatum {
  SymbolicScalar covolume;  ///< mu(Gamma \ G), q-free
  std::string label;
  std::string haar;

  /// Throws input unless the covolume is q-free and positive.
  void validate() const;
};

/// t-dependence of a density along a one-parameter family.
enum class DensityKernel {
  constant,       ///< c
  t_tanh_half_pi, ///< c * t * tanh(pi t / 2)
  t_coth_half_pi, ///< c * t * coth(pi t / 2)
};

std::string to_string(DensityKernel k);

/// Closed-form density c * kernel(t) against `reference_measure`.
struct Density {
  SymbolicScalar coefficient;
  DensityKernel kernel = DensityKernel::constant;
  std::string reference_measure = "dt";
  std::string haar;

  /// Value at t > 0 to the requested number of digits.
  NumericValue at(const mpq_class& t, int digits = 30) const;
  std::string to_string() const;
};

using GammaDensity = Density;

/// mu(Gamma \ G) * d(pi). Throws normalization when the two refer to
/// different Haar measures.
SymbolicScalar gamma_dimension(const LatticeDatum& lat, const FormalDegree& deg);

/// mu(Gamma \ G) * dnu pointwise, same reference measure.
GammaDensity gamma_density(const LatticeDatum& lat, const Density& plancherel_density);

/// SL(2,R) principal series density (t / (8 pi)) tanh(pi t / 2) for sign +1,
/// (t / (8 pi)) coth(pi t / 2) for sign -1, against dt, hyperbolic measure.
Density ps_plancherel_density(int sign);

/// ps_plancherel_density(sign) at t. Throws domain for t <= 0.
double ps_density(double t, int sign);
NumericValue ps_density_value(const mpq_class& t, int sign, int digits = 30);

/// Covolume of SL(2,Z) in SL(2,R) under the hyperbolic normalization.
LatticeDatum sl2z_lattice();

struct DensitySide {
  LatticeDatum lattice;
  Density local_density;
};

/// Equal iff covolumes and local densities agree; witness "covolume" or
/// "density". Throws input when kernels, reference measures or Haar
/// normalizations make the two sides incomparable.
CheckResult density_preservation_check(const DensitySide& left, const DensitySide& right);

struct ComparedPlace {
  std::string place;
  localgeom::LocalAlgebraSpec spec;
};

/// Everything needed to compare Gamma_S-densities of pi_S and its transfer:
/// the two covolumes and the local data at the compared places of S.
struct TransferCase {
  adelic::CovolumeSide left;
  adelic::CovolumeSide right;
  adelic::GlobalSetup setup;
  std::vector<ComparedPlace> finite_places;
  std::vector<plancherel::ArchTemperedParam> archimedean;  ///< GL(m,R) parameters
};

/// Compose the covolume verdict with local density preservation: ratio 1 at
/// every finite place and matching archimedean formal degrees blockwise.
CheckResult density_preservation_check(const TransferCase& c);

}  // namespace jlm::vndensity
