#pragma once

#include "nlreg/kernel.hpp"
#include "nlreg/quadrature.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nlreg {

enum class NodeKind { interior, collar };

/// Uniform nodes on [a - collar, b + collar]. Interior nodes lie strictly inside (a,b).
struct Mesh1D {
  double a = -1.0, b = 1.0, collar = 1.0, h = 0.5;
  std::vector<double> x;
  std::vector<NodeKind> kind;
  /// indices into x
  std::vector<int> interior, collar_nodes;

  int size() const { return static_cast<int>(x.size()); }
  double lo() const { return a - collar; }
  double hi() const { return b + collar; }
  /// first and last mesh indices of the interior block
  int first_interior() const { return interior.front(); }
};

Mesh1D build_mesh(double a, double b, double collar_width, double h);

/// Exterior data: nodal values on the collar and constants beyond it.
struct ExteriorData {
  /// empty means zero
  std::function<double(double)> collar;
  double far_left = 0.0;
  double far_right = 0.0;

  static ExteriorData constant(double c);
  bool is_zero() const;
};

using ScalarField = std::function<double(double)>;
ScalarField constant_field(double c);

/// E(phi_{i+d}, phi_i) for hats of width h and the translation-invariant kernel j(y-x).
double stiffness_entry(const KernelSpec& spec, int d, double h, const QuadConfig& cfg);
/// Hat autocorrelation: int Lambda(s) Lambda(s+t) ds for the unit hat.
double hat_correlation(double t);

struct AssembledSystem {
  TwoPointKernel K;
  Mesh1D mesh;
  QuadConfig cfg;
  /// E(phi_{i+d}, phi_i) for d in [-(n-1), n-1], stored at offset d + n - 1
  std::vector<double> toeplitz;
  /// interior x interior: row i is the test function
  Eigen::MatrixXd S;
  /// interior x collar coupling
  Eigen::MatrixXd S_collar;
  Eigen::MatrixXd mass;
  Eigen::MatrixXd mass_W;
  /// weight at the interior nodes (all ones unless x_modulated)
  Eigen::VectorXd w;
  double w_sup = 0.0;

  double toeplitz_at(int d) const { return toeplitz[static_cast<std::size_t>(d + mesh.size() - 1)]; }
  /// E restricted to the even part of j, interior block
  Eigen::MatrixXd even_part() const;
  /// D_s(u,u) = u^T D u on interior functions
  Eigen::MatrixXd dirichlet_form() const;
};

/// Galerkin system for L u = W u + f. x_modulated weights are evaluated at the test node.
AssembledSystem assemble(const TwoPointKernel& K, const Mesh1D& mesh, const ScalarField& W, const QuadConfig& cfg);

/// Load from exterior data: -E(G, phi_i) for the interior test functions.
Eigen::VectorXd exterior_load(const AssembledSystem& sys, const ExteriorData& g);
/// int f phi_i
Eigen::VectorXd source_load(const AssembledSystem& sys, const ScalarField& f);

struct DiscreteFunction {
  Mesh1D mesh;
  /// values at every mesh node
  Eigen::VectorXd values;
  double far_left = 0.0, far_right = 0.0;
  /// reciprocal condition estimate of the solve (0 when not from a solve)
  double rcond = 0.0;

  Eigen::VectorXd interior_values() const;
  /// P1 interpolant on the mesh, far constants outside
  double operator()(double x) const;
};

/// Solve (S - M_W) u = M f + load(g). Throws NumericalError near resonance.
DiscreteFunction solve(const AssembledSystem& sys, const ScalarField& f, const ExteriorData& g);

struct GardingEstimate {
  double c_hat = 0.0;
  int trials = 0;
};
/// max over random interior u of (D_s(u,u)/4 - E(u,u)) / |u|^2, floored at 0.
GardingEstimate garding_check(const AssembledSystem& sys, int trials, std::uint64_t seed);

/// Smallest eigenvalue of D_s u = lambda M u over interior functions.
double poincare_lambda1(const AssembledSystem& sys);

struct Residual {
  double max_abs = 0.0;
  /// max of E(u,phi_i) - (Wu + f, phi_i) and of its negative, each over |phi_i|_1
  double max_pos = 0.0, max_neg = 0.0;
};
Residual residual(const AssembledSystem& sys, const DiscreteFunction& u, const ScalarField& f);

/// x,u CSV with header
std::string solution_csv(const DiscreteFunction& u);

}  // namespace nlreg
