#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fraclab/exponents.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/modular.hpp"

namespace fraclab {

enum class RatioStatus {
  defined,
  zero_function_unit,  ///< 0/0 on a zero function, reported as 1
  undefined,           ///< no meaningful value; `value` is 0
};

const char* to_string(RatioStatus status);

/// A quotient that is never infinite or NaN.
struct Ratio {
  double value = 0.0;
  RatioStatus status = RatioStatus::undefined;

  /// num / den when den > 0; 0/0 gives the unit sentinel; x/0 is undefined.
  static Ratio of(double num, double den);
  bool defined() const { return status == RatioStatus::defined; }
};

// ---------------------------------------------------------------------------
// Hoelder

struct HolderReport {
  double lhs;          ///< ||f g||_r
  double rhs_product;  ///< ||f||_p ||g||_q
  Ratio ratio;
  double worst_conjugacy;  ///< max |1/r - 1/p - 1/q| over samples
};

/// Pointwise product of two grid functions on the same mesh.
GridFunction product(const GridFunction& f, const GridFunction& g);

/// Requires 1/r = 1/p + 1/q at every cell (or facet) centroid to 1e-12.
HolderReport holder_check(const GridFunction& f, const GridFunction& g, const ExponentField& p,
                          const ExponentField& q, const ExponentField& r, Scope scope);

// ---------------------------------------------------------------------------
// Fractional embedding into a constant-exponent space

struct EmbeddingReport {
  double lebesgue_r;    ///< ||f||_{L^r}
  double lebesgue_bar;  ///< ||f||_{L^pbar}
  double seminorm_tr;   ///< [f]_{t,r}
  double seminorm_sp;   ///< [f]_{s,p}
  Ratio lebesgue_ratio;
  Ratio seminorm_ratio;
  /// sum over pairs of w |x - y|^((s - t) r p / (p - r) - n)
  double kernel_bound;
};

/// Requires 0 < t < inf s and 1 < r < inf p over the sampled pairs.
EmbeddingReport embedding_check(const GridFunction& f, const ExponentField& p,
                                const ExponentField& s, double t, double r,
                                const PairQuadrature& pq);

// ---------------------------------------------------------------------------
// Trace inequality

struct TraceReport {
  double boundary_norm = 0.0;  ///< ||f||_{L^q(boundary)}
  double full_norm = 0.0;      ///< ||f||_{L^pbar} + [f]_{s,p}
  Ratio ratio;
  bool subcritical = false;
  /// Subcritical gap when subcritical (possibly infinite).
  std::optional<ExtendedReal> gap_k;
};

/// Throws NumericError when the full norm vanishes while the trace does not.
TraceReport trace_check(const GridFunction& f, const ExponentField& p, const ExponentField& q,
                        const ExponentField& s, const PairQuadrature& pq, int refinement = 2);
TraceReport trace_check(const GridFunction& f, const ExponentField& p, const ExponentField& q,
                        const ExponentField& s);

// ---------------------------------------------------------------------------
// Sharpness

/// f_k(x) = k^a g(k (x - x0) / radius), g supported in the unit ball.
struct ConcentrationFamily {
  /// Profile g(z) as a point expression in z; defaults to the standard
  /// mollifier exp(1 / (|z|^2 - 1)) on |z| < 1.
  std::optional<Expression> profile;
  Point x0{};
  double a = 0.0;
  double radius = 1.0;
  std::vector<double> scales;

  double operator()(const Point& x, double k, int dimension) const;
  GridFunction sample(const Domain& domain, double k) const;
};

struct FamilyCheck {
  bool admissible;  ///< both exponent inequalities hold on the ball
  double worst_interior;  ///< max of a p + s p - n (must be <= 0)
  double worst_boundary;  ///< min of a q - (n - 1) (must be > 0)
};

FamilyCheck check_family(const ConcentrationFamily& family, const ExponentField& p,
                         const ExponentField& q, const ExponentField& s, const Domain& domain);

struct SharpnessRow {
  double k;
  std::size_t support_cells;
  bool rejected;  ///< support below 3 cells
  TraceReport report;
};

struct SharpnessReport {
  FamilyCheck family;
  std::vector<SharpnessRow> rows;
  bool increasing;      ///< ratios strictly increasing over accepted rows
  double growth;        ///< last / first accepted ratio
  double spread;        ///< max / min accepted ratio
};

SharpnessReport sharpness_sweep(const ConcentrationFamily& family, const ExponentField& p,
                                const ExponentField& q, const ExponentField& s,
                                const Domain& domain);

// ---------------------------------------------------------------------------
// Seminorm domination chain on a covering

struct PatchChain {
  std::size_t patch;
  bool zero_function;
  double p_frozen;
  double t_aux;
  double frozen_seminorm;   ///< [f]_{t,p_i}(B_i)
  double weighted_norm;     ///< ||F||_{L^p(B_i x B_i, mu)}
  double holder_constant;   ///< C_mu = 2 ||1||_{L^b(mu)}
  double patch_seminorm;    ///< [f]_{s,p}(B_i)
  double patch_lebesgue;    ///< ||f||_{L^{p_i}(B_i)}
  Ratio first_ratio;        ///< frozen / (C_mu weighted)
  Ratio lebesgue_ratio;     ///< patch_lebesgue / ||f||_{L^pbar(Omega)}
  bool first_holds;         ///< frozen <= C_mu weighted
  bool second_holds;        ///< weighted <= patch_seminorm
  bool monotone_holds;      ///< patch_seminorm <= domain seminorm
};

struct ProofChainReport {
  double domain_seminorm;
  double domain_lebesgue;
  std::vector<PatchChain> patches;
  double union_lhs;  ///< ||f||_{L^q(boundary)}
  double union_rhs;  ///< sum_i ||f||_{L^q(B_i cap boundary)}
  bool union_holds;
  std::size_t violations;  ///< failed exact inequalities over all patches
};

/// Checks, per patch, the frozen-exponent Hoelder step, the weighted-measure
/// domination and domain monotonicity, plus the patch-union bound for the
/// boundary norm. Exact inequalities are compared with an allowance of
/// 4e-12 relative, the precision of the Luxemburg root.
ProofChainReport proof_chain_check(const GridFunction& f, const GapCertificate& certificate,
                                   const ExponentField& p, const ExponentField& q,
                                   const ExponentField& s);

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
  std::string case_id;
  std::string k_or_patch;
  double boundary_norm;
  double full_norm;
  Ratio ratio;
  bool subcritical;
  std::string status;
};

/// printf %.17g; infinities as "inf".
std::string format_real(double value);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

}  // namespace fraclab
