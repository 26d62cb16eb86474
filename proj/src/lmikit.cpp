#include "rfoc/lmikit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rfoc {

namespace {

using Mat = AffineMatrix::Mat;

Mat shift_matrix(const StateSpace& ss) {
  const int n = ss.order();
  Mat t = Mat::Zero(2 * n, n + 1);
  t.block(0, 0, n, n) = ss.A.cast<std::complex<double>>();
  t.block(0, n, n, 1) = ss.B.cast<std::complex<double>>();
  t.block(n, 0, n, n) = Mat::Identity(n, n);
  return t;
}

AffineMatrix output_row(const StateSpace& ss) {
  std::vector<AffineScalar> row = ss.C;
  row.push_back(ss.D);
  return AffineMatrix::row(row);
}

AffineMatrix constant_scalar(double v) { return AffineMatrix::scalar(AffineScalar(v)); }

// One uncertainty channel of the output: offset d Delta M, where M (n x N)
// multiplies the state and d is the deviation vector.
struct Channel {
  std::string suffix;
  const std::vector<std::vector<AffineScalar>>* m;
  const std::vector<double>* dev;
};

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

struct ScaledChannel {
  AffineMatrix border;  // [M 0], n x (N+1)
  AffineMatrix r;       // diagonal scaling
  AffineScalar weight;  // d R d'
};

std::vector<ScaledChannel> scale_channels(const std::vector<Channel>& channels, VarRegistry& registry,
                                          const std::string& tag) {
  std::vector<ScaledChannel> out;
  for (const Channel& c : channels) {
    if (all_zero(*c.dev)) continue;
    const int n = static_cast<int>(c.dev->size());
    const int id = registry.add_positive_diagonal("R_" + tag + c.suffix, n);
    std::vector<std::vector<AffineScalar>> rows = *c.m;
    for (auto& row : rows) row.emplace_back(0.0);
    AffineScalar w;
    for (int i = 0; i < n; ++i) w += (*c.dev)[i] * (*c.dev)[i] * registry.scalar(id, i);
    out.push_back({AffineMatrix::from_scalars(rows), registry.matrix(id), w});
  }
  return out;
}

// [[core, B_1', .., B_k'], [B_1, -R_1, 0..], ..] where B_i is the channel
// border placed on the first `core_cols` columns and zero beyond.
AffineMatrix bordered(const AffineMatrix& core, const std::vector<ScaledChannel>& channels) {
  const int k = static_cast<int>(channels.size());
  std::vector<std::vector<AffineMatrix>> grid(k + 1, std::vector<AffineMatrix>(k + 1));
  grid[0][0] = core;
  for (int i = 0; i < k; ++i) {
    const ScaledChannel& c = channels[i];
    AffineMatrix b = AffineMatrix::blocks({{c.border, AffineMatrix(c.border.rows(), core.cols() - c.border.cols())}});
    grid[i + 1][0] = b;
    grid[0][i + 1] = b.adjoint();
    for (int j = 0; j < k; ++j) {
      grid[i + 1][j + 1] =
          i == j ? -c.r : AffineMatrix(c.border.rows(), channels[j].border.rows());
    }
  }
  return AffineMatrix::blocks(grid);
}

AffineMatrix pr_core(const StateSpace& ss, VarRegistry& registry, const std::string& tag) {
  const int n = ss.order();
  const int p = registry.add_symmetric("P_" + tag, n, true);
  Mat phi = Mat::Zero(2, 2);
  phi(0, 1) = phi(1, 0) = 1.0;
  AffineMatrix xi = AffineMatrix::kron(phi, registry.matrix(p));
  AffineMatrix c_only = AffineMatrix::row(ss.C);
  AffineMatrix lower = AffineMatrix::blocks(
      {{AffineMatrix(n, n), c_only.adjoint()}, {c_only, AffineMatrix::scalar(ss.D + ss.D)}});
  return xi.congruence(shift_matrix(ss)) - lower;
}

AffineMatrix bg_core(const StateSpace& ss, const FrequencyBand& band, const AffineMatrix& rho_entry,
                     const AffineMatrix& rho_gamma, VarRegistry& registry, const std::string& tag) {
  const int n = ss.order();
  const bool complex = band.is_complex();
  const int p = complex ? registry.add_hermitian("P_" + tag, n, false) : registry.add_symmetric("P_" + tag, n, false);
  AffineMatrix xi = AffineMatrix::kron(band.phi, registry.matrix(p));
  if (band.kind != BandKind::All) {
    const int q =
        complex ? registry.add_hermitian("Q_" + tag, n, true) : registry.add_symmetric("Q_" + tag, n, true);
    xi += AffineMatrix::kron(band.psi, registry.matrix(q));
  }
  AffineMatrix gamma = xi.congruence(shift_matrix(ss));
  gamma += AffineMatrix::blocks({{AffineMatrix(n, n), AffineMatrix(n, 1)}, {AffineMatrix(1, n), -rho_gamma}});
  AffineMatrix cd = output_row(ss);
  return AffineMatrix::blocks({{gamma, cd.adjoint()}, {cd, rho_entry}});
}

void check_dims(const UncertainPlant& plant, const SynthesisSpec& spec, const ControllerVariables& k) {
  if (spec.m != k.m) throw std::invalid_argument("m: synthesis spec and controller disagree");
  if (spec.d_c.degree() != plant.order() + k.m) throw std::invalid_argument("d_c: degree must equal n + m");
}

}  // namespace

AffineMatrix hermitian_embed(const AffineMatrix& h) {
  constexpr double kTol = 1e-9;
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_embed: matrix is not square");
  if (h.hermitian_defect() > kTol) throw std::invalid_argument("hermitian_embed: matrix is not Hermitian");
  auto embed = [](const Mat& m) {
    const int n = static_cast<int>(m.rows());
    Mat out = Mat::Zero(2 * n, 2 * n);
    out.block(0, 0, n, n) = m.real().cast<std::complex<double>>();
    out.block(n, n, n, n) = m.real().cast<std::complex<double>>();
    out.block(0, n, n, n) = (-m.imag()).cast<std::complex<double>>();
    out.block(n, 0, n, n) = m.imag().cast<std::complex<double>>();
    return out;
  };
  AffineMatrix out(embed(h.constant()));
  for (const auto& [v, m] : h.terms()) out.add_term(v, embed(m));
  return out;
}

AffineMatrix kyp_pr_lmi(const StateSpace& ss, VarRegistry& registry, const std::string& tag) {
  return pr_core(ss, registry, tag);
}

AffineMatrix gkyp_bg_lmi(const StateSpace& ss, const FrequencyBand& band, double rho, VarRegistry& registry,
                         const std::string& tag) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho: must be positive");
  return bg_core(ss, band, constant_scalar(-rho), constant_scalar(rho), registry, tag);
}

Lmi stability_lmi(const UncertainPlant& plant, const SynthesisSpec& spec, const ControllerVariables& k,
                  VarRegistry& registry) {
  check_dims(plant, spec, k);
  const ShapedNumerators num = shaped_numerators(plant, k, spec.d_c);
  const StateSpace ss = ctrl_canonical(num.sn, spec.d_c);
  const OutputOffset off = uncertain_output_offset(plant, k);
  const auto channels = scale_channels({{"a", &off.X, &plant.a_dev()}, {"b", &off.Y, &plant.b_dev()}}, registry, "s");
  AffineMatrix core = pr_core(ss, registry, "s");
  const int n1 = ss.order() + 1;
  AffineScalar w;
  for (const auto& c : channels) w += c.weight;
  AffineMatrix bump = AffineMatrix::blocks({{AffineMatrix(n1 - 1, n1 - 1), AffineMatrix(n1 - 1, 1)},
                               {AffineMatrix(1, n1 - 1), AffineMatrix::scalar(w)}});
  return {"stability", bordered(core + bump, channels)};
}

namespace {

Lmi split_lmi(const std::string& name, const AffinePoly& numer, const Poly& d_c, const FrequencyBand& band,
              double rho, const std::vector<Channel>& channels, VarRegistry& registry, const std::string& tag) {
  const StateSpace ss = ctrl_canonical(numer, d_c);
  const auto scaled = scale_channels(channels, registry, tag);
  AffineScalar h = -rho;
  for (const auto& c : scaled) h += c.weight;
  AffineMatrix core = bg_core(ss, band, AffineMatrix::scalar(h), constant_scalar(rho), registry, tag);
  return {name, bordered(core, scaled)};
}

void check_split(const SynthesisSpec& spec) {
  spec.validate();
}

}  // namespace

std::array<Lmi, 4> performance_lmis(const UncertainPlant& plant, const SynthesisSpec& spec,
                                    const ControllerVariables& k, VarRegistry& registry) {
  check_dims(plant, spec, k);
  check_split(spec);
  const ShapedNumerators num = shaped_numerators(plant, k, spec.d_c);
  const OutputOffset off = uncertain_output_offset(plant, k);
  const std::vector<double>& ad = plant.a_dev();
  const std::vector<double>& bd = plant.b_dev();
  return {
      split_lmi("sensitivity_shaping", num.p1n, spec.d_c, spec.band_s, spec.delta_s,
                {{"a", &off.X, &ad}, {"b", &off.Y, &bd}}, registry, "p1"),
      split_lmi("sensitivity_residual", num.p2n, spec.d_c, spec.band_s, (1.0 - spec.delta_s) * spec.rho_s,
                {{"a", &off.X, &ad}}, registry, "p2"),
      split_lmi("complementary_shaping", num.p1n, spec.d_c, spec.band_t, spec.delta_t,
                {{"a", &off.X, &ad}, {"b", &off.Y, &bd}}, registry, "p3"),
      split_lmi("complementary_residual", num.p3n, spec.d_c, spec.band_t, (1.0 - spec.delta_t) * spec.rho_t,
                {{"b", &off.Y, &bd}}, registry, "p4"),
  };
}

std::vector<Lmi> robust_synthesis_lmis(const UncertainPlant& plant, const SynthesisSpec& spec,
                                       const ControllerVariables& k, VarRegistry& registry) {
  std::vector<Lmi> out{stability_lmi(plant, spec, k, registry)};
  for (Lmi& l : performance_lmis(plant, spec, k, registry)) out.push_back(std::move(l));
  return out;
}

std::vector<Lmi> concrete_plant_lmis(const PlantInstance& plant, const SynthesisSpec& spec,
                                     const ControllerVariables& k, VarRegistry& registry, const std::string& tag) {
  check_split(spec);
  if (spec.m != k.m) throw std::invalid_argument("m: synthesis spec and controller disagree");
  const ShapedNumerators num = shaped_numerators(plant.a, plant.b, k, spec.d_c);
  const std::string t = tag.empty() ? "" : tag + "_";
  std::vector<Lmi> out;
  out.push_back({t + "stability", kyp_pr_lmi(ctrl_canonical(num.sn, spec.d_c), registry, t + "s")});
  out.push_back({t + "sensitivity_shaping",
                 gkyp_bg_lmi(ctrl_canonical(num.p1n, spec.d_c), spec.band_s, spec.delta_s, registry, t + "p1")});
  out.push_back({t + "sensitivity_residual", gkyp_bg_lmi(ctrl_canonical(num.p2n, spec.d_c), spec.band_s,
                                                         (1.0 - spec.delta_s) * spec.rho_s, registry, t + "p2")});
  out.push_back({t + "complementary_shaping",
                 gkyp_bg_lmi(ctrl_canonical(num.p1n, spec.d_c), spec.band_t, spec.delta_t, registry, t + "p3")});
  out.push_back({t + "complementary_residual", gkyp_bg_lmi(ctrl_canonical(num.p3n, spec.d_c), spec.band_t,
                                                           (1.0 - spec.delta_t) * spec.rho_t, registry, t + "p4")});
  return out;
}

std::vector<Lmi> vertex_baseline_lmis(const UncertainPlant& plant, const SynthesisSpec& spec,
                                      const ControllerVariables& k, VarRegistry& registry, int max_uncertain) {
  const int n = plant.order();
  const int dims = 2 * n;
  if (dims > max_uncertain) {
    throw std::invalid_argument("vertex_baseline: 2n = " + std::to_string(dims) + " exceeds the vertex guard " +
                                std::to_string(max_uncertain));
  }
  std::set<std::pair<std::vector<double>, std::vector<double>>> seen;
  std::vector<Lmi> out;
  int index = 0;
  for (unsigned long mask = 0; mask < (1UL << dims); ++mask) {
    UncertaintySample s;
    for (int i = 0; i < n; ++i) s.delta_a.push_back(((mask >> i) & 1UL) ? 1.0 : -1.0);
    for (int i = 0; i < n; ++i) s.delta_b.push_back(((mask >> (n + i)) & 1UL) ? 1.0 : -1.0);
    const PlantInstance p = instantiate(plant, s);
    if (!seen.insert({p.a.coeffs(), p.b.coeffs()}).second) continue;
    for (Lmi& l : concrete_plant_lmis(p, spec, k, registry, "v" + std::to_string(index))) out.push_back(std::move(l));
    ++index;
  }
  return out;
}

std::vector<Lmi> nominal_lmis(const UncertainPlant& plant, const SynthesisSpec& spec, const ControllerVariables& k,
                              VarRegistry& registry) {
  return concrete_plant_lmis({plant.a_center(), plant.b_center()}, spec, k, registry, "nom");
}

}  // namespace rfoc
