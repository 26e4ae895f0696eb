#pragma once

// Formal degrees and Plancherel-density bookkeeping for GL(nd) and its inner
// forms: Steinberg degrees at non-archimedean places, the local density ratio
// dnu'/dnu, and the archimedean discrete-series data matched by the real
// Jacquet-Langlands map.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jlm/localgeom.hpp"
#include "jlm/symexpr.hpp"

namespace jlm::plancherel {

using localgeom::LocalAlgebraSpec;
using localgeom::Normalization;
using symexpr::SymbolicScalar;

/// Which constant multiplies prod (q^{e i} - 1) in the Steinberg degree. The
/// same constant is applied to GL(nd, F_v) and to GL(n_v, D_v), so the choice
/// cancels in every ratio.
enum class SteinbergConstant {
  inverse_total_rank,  ///< 1/(m e) = 1/(nd) on both sides (default)
  inverse_global_n,    ///< 1/n, n the global matrix size
  inverse_local_n,     ///< 1/n_v
};

std::string to_string(SteinbergConstant c);

struct SteinbergDegree {
  SymbolicScalar value;
  long m = 1;  ///< GL(m, D)
  long e = 1;  ///< index of D
  Normalization normalization = Normalization::mass_one;
  std::string convention;
};

/// constant * prod_{i=1}^{m-1} (q^{e i} - 1) with the maximal compact subgroup
/// of total mass one. `q` is the formal variable or a number; the constant
/// defaults to 1/(m e).
SteinbergDegree steinberg_degree(long m, long e, const SymbolicScalar& q,
                                 std::optional<mpq_class> constant = std::nullopt);

/// Factors of dnu'_v / dnu_v under the local Tamagawa measures.
struct RatioBreakdown {
  SymbolicScalar steinberg_quotient;  ///< deg St_{G'} / deg St_G, mass-one measures
  SymbolicScalar volume_quotient;     ///< mu_v(GL(nd,O_v)) / mu_v(GL(n_v,O(D_v)))
  SymbolicScalar ratio;               ///< product of the two, canonical
  std::string convention;
};

RatioBreakdown plancherel_ratio_breakdown(const LocalAlgebraSpec& spec,
                                          SteinbergConstant constant = SteinbergConstant::inverse_total_rank);

/// dnu'_v / dnu_v in canonical form. The correspondence preserves the
/// Plancherel densities exactly when this is 1.
SymbolicScalar plancherel_ratio(const LocalAlgebraSpec& spec,
                                SteinbergConstant constant = SteinbergConstant::inverse_total_rank);

/// Same ratio assembled from the two full Tamagawa volumes of the maximal
/// compact subgroups instead of the closed-form quotient.
symexpr::SurdScalar plancherel_ratio_from_volumes(const LocalAlgebraSpec& spec);

// --- archimedean ---------------------------------------------------------

/// Discrete series block H_k(omega) of GL(2,R), or V_k(omega) of H^x.
struct DiscreteSeriesBlock {
  long k = 1;
  std::string central_character;
  friend bool operator==(const DiscreteSeriesBlock&, const DiscreteSeriesBlock&) = default;
};

/// Unitary character sign(x)^e |x|^{it} of GL(1,R).
struct CharacterBlock {
  int sign = 1;  ///< +1 or -1
  double t = 0.0;
  std::string label;
  friend bool operator==(const CharacterBlock&, const CharacterBlock&) = default;
};

using ArchBlock = std::variant<DiscreteSeriesBlock, CharacterBlock>;

enum class ArchTarget { real_group, quaternionic_group };

std::string to_string(ArchTarget t);

/// Tempered parameter of GL(m,R) (blocks of size 2 and 1) or of GL(m/2,H)
/// (blocks of size 2 only). The block list is ordered and validated on
/// construction.
class ArchTemperedParam {
 public:
  /// Throws invalid_parameter for k < 1, a sign other than +-1, a non-finite
  /// t, an empty block list, or a character block on the quaternionic side.
  ArchTemperedParam(ArchTarget target, std::vector<ArchBlock> blocks);

  static ArchTemperedParam real(std::vector<ArchBlock> blocks) {
    return {ArchTarget::real_group, std::move(blocks)};
  }

  ArchTarget target() const noexcept { return target_; }
  const std::vector<ArchBlock>& blocks() const noexcept { return blocks_; }
  /// m for GL(m,R); 2 * (size) for the quaternionic group.
  long rank() const;
  bool all_discrete_series() const;

  friend bool operator==(const ArchTemperedParam&, const ArchTemperedParam&) = default;

 private:
  ArchTarget target_;
  std::vector<ArchBlock> blocks_;
};

struct FormalDegree {
  SymbolicScalar value;
  std::string representation;
  /// Haar measure the degree refers to; degrees only combine with covolumes
  /// measured in the same normalization.
  std::string haar;
};

inline constexpr const char* kTamagawaHaar = "tamagawa";
inline constexpr const char* kHyperbolicHaar = "sl2_hyperbolic";

/// k/(2 pi^2) for a single H_k(omega) or V_k(omega) block. Throws
/// not_square_integrable for anything else.
FormalDegree arch_formal_degree(const ArchTemperedParam& param);

/// (k-1)/(4 pi) for the discrete series pi_k of SL(2,R), measure y^{-2}dxdy on
/// the upper half-plane. Throws no_discrete_series for k < 2.
FormalDegree sl2_discrete_series_degree(long k);

/// Real Jacquet-Langlands map on parameters of GL(2n,R). All-discrete-series
/// parameters go to the quaternionic parameter with the same (k, omega) list;
/// any character block gives the zero element (std::nullopt). Throws
/// invalid_parameter for an odd rank or a non-real input.
std::optional<ArchTemperedParam> jl_match_real(const ArchTemperedParam& param);

/// True iff every Levi block size is divisible by d.
bool jl_transferable_padic(const std::vector<long>& levi_partition, long d);

}  // namespace jlm::plancherel
