#pragma once

#include <array>
#include <string>
#include <vector>

#include "rfoc/lmi_expr.hpp"
#include "rfoc/plantmodel.hpp"
#include "rfoc/realization.hpp"

namespace rfoc {

// A named condition lhs(z) < 0.
struct Lmi {
  std::string name;
  AffineMatrix lhs;
};

// Real form of a Hermitian expression: [[Re H, -Im H], [Im H, Re H]].
// Eigenvalues are those of H, each repeated twice. Throws
// std::invalid_argument if the expression is not Hermitian.
AffineMatrix hermitian_embed(const AffineMatrix& h);

// Positive realness (KYP): fresh symmetric P > 0 named "P_<tag>",
//   [A B; I 0]' [0 P; P 0] [A B; I 0] - [0 C'; C D + D'] < 0.
AffineMatrix kyp_pr_lmi(const StateSpace& ss, VarRegistry& registry, const std::string& tag);

// Finite-frequency bounded realness |G(jw)| < rho on the band: fresh P
// (free) and Q > 0 named "P_<tag>", "Q_<tag>"; both are Hermitian when the
// band's Psi is complex and real symmetric otherwise. Q is omitted for the
// entire-axis band.
AffineMatrix gkyp_bg_lmi(const StateSpace& ss, const FrequencyBand& band, double rho, VarRegistry& registry,
                         const std::string& tag);

// Robust stability via positive realness of G_s with diagonal scalings
// R_sa, R_sb on the interval deviations. Dimension (N+1) + 2n; a scaling
// block is dropped when its deviation vector is identically zero.
Lmi stability_lmi(const UncertainPlant& plant, const SynthesisSpec& spec, const ControllerVariables& k,
                  VarRegistry& registry);

// Robust |S| < rho_s on band_s and |T| < rho_t on band_t through the split
// |1 - G_s| < delta, |G_p2| < (1 - delta) rho_s (resp. G_p3 for T).
// Order: p1 (S side), p2, p3 (T side), p4.
std::array<Lmi, 4> performance_lmis(const UncertainPlant& plant, const SynthesisSpec& spec,
                                    const ControllerVariables& k, VarRegistry& registry);

// All five conditions for the robust design, in the order above.
std::vector<Lmi> robust_synthesis_lmis(const UncertainPlant& plant, const SynthesisSpec& spec,
                                       const ControllerVariables& k, VarRegistry& registry);

// The five conditions written for one concrete plant (no scaling variables).
std::vector<Lmi> concrete_plant_lmis(const PlantInstance& plant, const SynthesisSpec& spec,
                                     const ControllerVariables& k, VarRegistry& registry, const std::string& tag);

inline constexpr int kDefaultVertexGuard = 16;

// Five conditions per distinct vertex plant of the interval box (2^(2n)
// vertices before deduplication). Throws std::invalid_argument when 2n
// exceeds max_uncertain.
std::vector<Lmi> vertex_baseline_lmis(const UncertainPlant& plant, const SynthesisSpec& spec,
                                      const ControllerVariables& k, VarRegistry& registry,
                                      int max_uncertain = kDefaultVertexGuard);

// Nominal plant only.
std::vector<Lmi> nominal_lmis(const UncertainPlant& plant, const SynthesisSpec& spec, const ControllerVariables& k,
                              VarRegistry& registry);

}  // namespace rfoc
