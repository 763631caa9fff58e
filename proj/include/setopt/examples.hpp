#pragma once

#include "setopt/cone.hpp"
#include "setopt/problem.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace setopt {

/// Optional knobs for scaled-down variants of the built-in instances.
template <typename Scalar>
struct ExampleOverrides {
  std::optional<Index> p;      // family size
  std::optional<Scalar> grid;  // s for ex5_5 (U has 2s+1 points)
};

template <typename Scalar>
struct Example {
  ProblemInstance<Scalar> problem;
  Cone<Scalar> cone;
};

struct RegistryEntry {
  std::string_view name;
  std::string_view summary;
};

inline constexpr std::array<RegistryEntry, 7> kRegistry{{
    {"ex5_1", "p=20, R^2 -> R^2, circle offsets on a quadratic bowl, K=R^2_+"},
    {"ex5_2", "p=50, R -> R^2, figure-eight offsets, logistic + cosine terms"},
    {"ex5_3", "p=14, R^2 -> R^3, quadratic bowls with circle offsets"},
    {"ex5_4", "p=30, R -> R^3, (x^2-4) sin(x^2-4) component"},
    {"ex5_5", "p=100, R^2 -> R^3, robust facility location on a 10x10 grid"},
    {"ex5_6", "p=4, R -> R^2, polyhedral cone 5y1-y2>=0, -9y1+10y2>=0"},
    {"ex5_7", "p=100, R^2 -> R^2, polyhedral cone 2y1-6y2>=0, -6y1+7y2>=0"},
}};

namespace detail {

template <typename Scalar>
Box<Scalar> square_box(Index n, Scalar lo, Scalar hi) {
  return {Vector<Scalar>::Constant(n, lo), Vector<Scalar>::Constant(n, hi)};
}

template <typename Scalar>
Scalar angle(Index i, Index p) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(i) / Scalar(p);
}

template <typename Scalar>
Matrix<Scalar> scalar_matrix(Scalar v) {
  return Matrix<Scalar>::Constant(1, 1, v);
}

// x_1^2 + x_2^2 + 0.5 sin(theta_i), 2x_1^2 + 2x_2^2 + 0.5 cos(theta_i)
template <typename Scalar>
Example<Scalar> ex5_1(Index p) {
  ProblemInstance<Scalar> P;
  P.name = "ex5_1";
  P.n = 2;
  P.m = 2;
  P.p = p;
  P.value = [p](Index i, const Vector<Scalar>& x) {
    const Scalar t = angle<Scalar>(i, p);
    const Scalar r = x.squaredNorm();
    return Vector<Scalar>{{r + Scalar(0.5) * std::sin(t),
                           Scalar(2) * r + Scalar(0.5) * std::cos(t)}};
  };
  P.jacobian = [](Index, const Vector<Scalar>& x) {
    Matrix<Scalar> J(2, 2);
    J.row(0) = Scalar(2) * x.transpose();
    J.row(1) = Scalar(4) * x.transpose();
    return J;
  };
  P.hessian = [](Index, const Vector<Scalar>&) {
    return HessianStack<Scalar>{Scalar(2) * Matrix<Scalar>::Identity(2, 2),
                                Scalar(4) * Matrix<Scalar>::Identity(2, 2)};
  };
  P.sample_box = square_box<Scalar>(2, -4, 4);
  P.rho_hint = Scalar(2);
  return {std::move(P), Cone<Scalar>::orthant(2)};
}

// 0.35 sin cos + x^2, 0.35 cos + 1/(1+e^{2x}) + cos(2x)
template <typename Scalar>
Example<Scalar> ex5_2(Index p) {
  ProblemInstance<Scalar> P;
  P.name = "ex5_2";
  P.n = 1;
  P.m = 2;
  P.p = p;
  P.value = [p](Index i, const Vector<Scalar>& x) {
    const Scalar t = angle<Scalar>(i, p);
    const Scalar v = x(0);
    return Vector<Scalar>{
        {Scalar(0.35) * std::sin(t) * std::cos(t) + v * v,
         Scalar(0.35) * std::cos(t) + Scalar(1) / (Scalar(1) + std::exp(2 * v)) +
             std::cos(2 * v)}};
  };
  P.jacobian = [](Index, const Vector<Scalar>& x) {
    const Scalar v = x(0);
    const Scalar s = Scalar(1) / (Scalar(1) + std::exp(2 * v));
    Matrix<Scalar> J(2, 1);
    J(0, 0) = 2 * v;
    J(1, 0) = -2 * s * (1 - s) - 2 * std::sin(2 * v);
    return J;
  };
  P.hessian = [](Index, const Vector<Scalar>& x) {
    const Scalar v = x(0);
    const Scalar s = Scalar(1) / (Scalar(1) + std::exp(2 * v));
    return HessianStack<Scalar>{
        scalar_matrix<Scalar>(2),
        scalar_matrix<Scalar>(4 * s * (1 - s) * (1 - 2 * s) -
                              4 * std::cos(2 * v))};
  };
  P.sample_box = square_box<Scalar>(1, Scalar(0.77), Scalar(6.3));
  return {std::move(P), Cone<Scalar>::orthant(2)};
}

// |x|^2 + 0.25 sin, 4|x|^2 + 0.25 cos, |x|^2 + i
template <typename Scalar>
Example<Scalar> ex5_3(Index p) {
  ProblemInstance<Scalar> P;
  P.name = "ex5_3";
  P.n = 2;
  P.m = 3;
  P.p = p;
  P.value = [p](Index i, const Vector<Scalar>& x) {
    const Scalar t = angle<Scalar>(i, p);
    const Scalar r = x.squaredNorm();
    return Vector<Scalar>{{r + Scalar(0.25) * std::sin(t),
                           4 * r + Scalar(0.25) * std::cos(t),
                           r + Scalar(i + 1)}};
  };
  P.jacobian = [](Index, const Vector<Scalar>& x) {
    Matrix<Scalar> J(3, 2);
    J.row(0) = 2 * x.transpose();
    J.row(1) = 8 * x.transpose();
    J.row(2) = 2 * x.transpose();
    return J;
  };
  P.hessian = [](Index, const Vector<Scalar>&) {
    const Matrix<Scalar> I = Matrix<Scalar>::Identity(2, 2);
    return HessianStack<Scalar>{2 * I, 8 * I, 2 * I};
  };
  P.sample_box = square_box<Scalar>(2, -3, 4);
  P.rho_hint = Scalar(2);
  return {std::move(P), Cone<Scalar>::orthant(3)};
}

// x^2 + c, (x^2-4) sin(x^2-4) + c, c x^2 with c = (i-1)/p
template <typename Scalar>
Example<Scalar> ex5_4(Index p) {
  ProblemInstance<Scalar> P;
  P.name = "ex5_4";
  P.n = 1;
  P.m = 3;
  P.p = p;
  P.value = [p](Index i, const Vector<Scalar>& x) {
    const Scalar c = Scalar(i) / Scalar(p);
    const Scalar v = x(0);
    const Scalar g = v * v - 4;
    return Vector<Scalar>{{v * v + c, g * std::sin(g) + c, c * v * v}};
  };
  P.jacobian = [p](Index i, const Vector<Scalar>& x) {
    const Scalar c = Scalar(i) / Scalar(p);
    const Scalar v = x(0);
    const Scalar g = v * v - 4;
    Matrix<Scalar> J(3, 1);
    J(0, 0) = 2 * v;
    J(1, 0) = (std::sin(g) + g * std::cos(g)) * 2 * v;
    J(2, 0) = 2 * c * v;
    return J;
  };
  P.hessian = [p](Index i, const Vector<Scalar>& x) {
    const Scalar c = Scalar(i) / Scalar(p);
    const Scalar v = x(0);
    const Scalar g = v * v - 4;
    const Scalar d1 = std::sin(g) + g * std::cos(g);
    const Scalar d2 = 2 * std::cos(g) - g * std::sin(g);
    return HessianStack<Scalar>{scalar_matrix<Scalar>(2),
                                scalar_matrix<Scalar>(d2 * 4 * v * v + 2 * d1),
                                scalar_matrix<Scalar>(2 * c)};
  };
  P.sample_box = square_box<Scalar>(1, Scalar(1.54), Scalar(2.16));
  return {std::move(P), Cone<Scalar>::orthant(3)};
}

// Robust facility location: 1/2 |x - l_c - u_i|^2 for three sites l_c and
// u_i ranging over U x U, U = {-1 + k/s : k = 0..2s}, row-major, U ascending.
template <typename Scalar>
Example<Scalar> ex5_5(Scalar s) {
  const Scalar twice = 2 * s;
  const Index steps = static_cast<Index>(std::llround(twice));
  require(s > 0 && std::abs(twice - Scalar(steps)) < Scalar(1e-9),
          "ex5_5: grid parameter s must be a positive multiple of 1/2");
  std::vector<Scalar> grid;
  for (Index k = 0; k <= steps; ++k) grid.push_back(Scalar(-1) + Scalar(k) / s);
  std::vector<Vector<Scalar>> shifts;
  for (Scalar a : grid) {
    for (Scalar b : grid) shifts.push_back(Vector<Scalar>{{a, b}});
  }
  const std::array<Vector<Scalar>, 3> sites{
      Vector<Scalar>{{0, 8}}, Vector<Scalar>{{0, 0}}, Vector<Scalar>{{8, 0}}};

  ProblemInstance<Scalar> P;
  P.name = "ex5_5";
  P.n = 2;
  P.m = 3;
  P.p = static_cast<Index>(shifts.size());
  P.value = [shifts, sites](Index i, const Vector<Scalar>& x) {
    Vector<Scalar> v(3);
    for (Index c = 0; c < 3; ++c) {
      v(c) = Scalar(0.5) * (x - sites[c] - shifts[i]).squaredNorm();
    }
    return v;
  };
  P.jacobian = [shifts, sites](Index i, const Vector<Scalar>& x) {
    Matrix<Scalar> J(3, 2);
    for (Index c = 0; c < 3; ++c) {
      J.row(c) = (x - sites[c] - shifts[i]).transpose();
    }
    return J;
  };
  P.hessian = [](Index, const Vector<Scalar>&) {
    const Matrix<Scalar> I = Matrix<Scalar>::Identity(2, 2);
    return HessianStack<Scalar>{I, I, I};
  };
  P.sample_box = square_box<Scalar>(2, -50, 50);
  P.rho_hint = Scalar(1);
  return {std::move(P), Cone<Scalar>::orthant(3)};
}

// 2x^2 + c + 4x, (x/2) cos x - c sin x with c = (i-3)/2
template <typename Scalar>
Example<Scalar> ex5_6(Index p) {
  ProblemInstance<Scalar> P;
  P.name = "ex5_6";
  P.n = 1;
  P.m = 2;
  P.p = p;
  auto offset = [](Index i) { return Scalar(i + 1 - 3) / Scalar(2); };
  P.value = [offset](Index i, const Vector<Scalar>& x) {
    const Scalar c = offset(i);
    const Scalar v = x(0);
    return Vector<Scalar>{{2 * v * v + c + 4 * v,
                           v / 2 * std::cos(v) - c * std::sin(v)}};
  };
  P.jacobian = [offset](Index i, const Vector<Scalar>& x) {
    const Scalar c = offset(i);
    const Scalar v = x(0);
    Matrix<Scalar> J(2, 1);
    J(0, 0) = 4 * v + 4;
    J(1, 0) = std::cos(v) / 2 - v / 2 * std::sin(v) - c * std::cos(v);
    return J;
  };
  P.hessian = [offset](Index i, const Vector<Scalar>& x) {
    const Scalar c = offset(i);
    const Scalar v = x(0);
    return HessianStack<Scalar>{
        scalar_matrix<Scalar>(4),
        scalar_matrix<Scalar>(-std::sin(v) - v / 2 * std::cos(v) +
                              c * std::sin(v))};
  };
  P.sample_box = square_box<Scalar>(1, Scalar(2.3350), Scalar(4.4010));
  Matrix<Scalar> rows(2, 2);
  rows << 5, -1, -9, 10;
  return {std::move(P), Cone<Scalar>(rows, Vector<Scalar>::Ones(2))};
}

template <typename Scalar>
Example<Scalar> ex5_7(Index p) {
  ProblemInstance<Scalar> P;
  P.name = "ex5_7";
  P.n = 2;
  P.m = 2;
  P.p = p;
  auto offsets = [p](Index i) {
    const Scalar t = angle<Scalar>(i, p);
    const Scalar s = std::sin(t), c = std::cos(t);
    return std::array<Scalar, 2>{Scalar(0.25) * c * s * s,
                                 Scalar(0.25) * c * c * s};
  };
  P.value = [offsets](Index i, const Vector<Scalar>& x) {
    const auto off = offsets(i);
    const Scalar a = x(0), b = x(1), E = std::exp(a + b);
    return Vector<Scalar>{
        {a * a + std::sin(a) + a * a * std::cos(b) + off[0] + E + b * b,
         2 * a * a + b * b * std::cos(a) + off[1] + std::cos(b) + E +
             2 * b * b}};
  };
  P.jacobian = [](Index, const Vector<Scalar>& x) {
    const Scalar a = x(0), b = x(1), E = std::exp(a + b);
    Matrix<Scalar> J(2, 2);
    J(0, 0) = 2 * a + std::cos(a) + 2 * a * std::cos(b) + E;
    J(0, 1) = -a * a * std::sin(b) + E + 2 * b;
    J(1, 0) = 4 * a - b * b * std::sin(a) + E;
    J(1, 1) = 2 * b * std::cos(a) - std::sin(b) + E + 4 * b;
    return J;
  };
  P.hessian = [](Index, const Vector<Scalar>& x) {
    const Scalar a = x(0), b = x(1), E = std::exp(a + b);
    Matrix<Scalar> H0(2, 2), H1(2, 2);
    H0(0, 0) = 2 - std::sin(a) + 2 * std::cos(b) + E;
    H0(0, 1) = H0(1, 0) = -2 * a * std::sin(b) + E;
    H0(1, 1) = -a * a * std::cos(b) + E + 2;
    H1(0, 0) = 4 - b * b * std::cos(a) + E;
    H1(0, 1) = H1(1, 0) = -2 * b * std::sin(a) + E;
    H1(1, 1) = 2 * std::cos(a) - std::cos(b) + E + 4;
    return HessianStack<Scalar>{H0, H1};
  };
  P.sample_box = square_box<Scalar>(2, -1, 1);
  Matrix<Scalar> rows(2, 2);
  rows << 2, -6, -6, 7;
  // (1,1) is not interior to this cone; use the max-min-slack direction.
  return {std::move(P), Cone<Scalar>(rows, max_slack_direction_2d(rows))};
}

}  // namespace detail

/// Built-in instances by registry name (ex5_1 .. ex5_7).
template <typename Scalar = double>
Example<Scalar> make_example(std::string_view name,
                             const ExampleOverrides<Scalar>& ov = {}) {
  auto fam = [&](Index fallback) {
    const Index p = ov.p.value_or(fallback);
    detail::require(p >= 1, "make_example: family size must be >= 1");
    return p;
  };
  if (name == "ex5_1") return detail::ex5_1<Scalar>(fam(20));
  if (name == "ex5_2") return detail::ex5_2<Scalar>(fam(50));
  if (name == "ex5_3") return detail::ex5_3<Scalar>(fam(14));
  if (name == "ex5_4") return detail::ex5_4<Scalar>(fam(30));
  if (name == "ex5_5") return detail::ex5_5<Scalar>(ov.grid.value_or(Scalar(4.5)));
  if (name == "ex5_6") return detail::ex5_6<Scalar>(fam(4));
  if (name == "ex5_7") return detail::ex5_7<Scalar>(fam(100));
  throw InvalidInput("unknown example '" + std::string(name) + "'");
}

}  // namespace setopt
