#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pfaffdist/common.hpp"
#include "pfaffdist/curves.hpp"

namespace pfaffdist::isometry {

struct Mat2 {
  double a11 = 1, a12 = 0, a21 = 0, a22 = 1;

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double angle);
  // Reflection across the line through the origin with the given direction.
  static Mat2 reflection(Vec2 direction);

  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  friend Mat2 operator*(const Mat2& p, const Mat2& q);
  friend Mat2 operator+(const Mat2& p, const Mat2& q);
  friend Mat2 operator-(const Mat2& p, const Mat2& q);
  // Max-abs entry norm.
  double max_abs() const;
  std::optional<Mat2> inverse() const;
};

// v -> A v + w with A orthogonal.
class Isometry {
 public:
  Isometry() = default;
  // Accepts A with |A^T A - I| <= 1e-12; re-orthonormalises by polar
  // decomposition up to 1e-9; Parameter error beyond that.
  Isometry(Mat2 a, Vec2 w);

  static Isometry identity() { return {}; }
  static Isometry translation(Vec2 w);
  static Isometry rotation(Point2 center, double angle);
  // Reflection across the line through `point` with direction `direction`.
  static Isometry reflection(Point2 point, Vec2 direction);

  const Mat2& a() const { return a_; }
  Vec2 w() const { return w_; }
  Point2 apply(Point2 v) const { return a_ * v + w_; }
  Point2 operator()(Point2 v) const { return apply(v); }

  // "a11 a12 a21 a22 w1 w2"
  std::string to_text() const;
  static Isometry parse(std::string_view text);

 private:
  Mat2 a_;
  Vec2 w_{0, 0};
};

Point2 apply(const Isometry& h, Point2 v);
// h2 after h1.
Isometry compose(const Isometry& h2, const Isometry& h1);
Isometry inverse(const Isometry& h);

struct IdentityClass {};
struct TranslationClass {
  Vec2 w;
};
struct RotationClass {
  Point2 center;
  double angle = 0.0;  // in (-pi, pi]
};
// Axis: the line through `point` with unit direction `direction`.
struct ReflectionClass {
  Point2 point;
  Vec2 direction;
};
struct GlideReflectionClass {
  Point2 point;
  Vec2 direction;
  Vec2 shift;  // translation along the axis
};

using IsometryClass =
    std::variant<IdentityClass, TranslationClass, RotationClass, ReflectionClass, GlideReflectionClass>;

// Report line "class center/axis params".
std::string describe(const IsometryClass& c);

IsometryClass classify(const Isometry& h, double tol = 1e-9);

// (I - A2^{-1})(I - A1^{-1})(p2 - p1) for rotations h1, h2 with centers p1, p2.
Vec2 rotation_commutator(const Isometry& h1, const Isometry& h2, double tol = 1e-9);

struct RigidPair {
  Isometry direct;
  Isometry reflected;
};

// Isometries with T(p_i) = p_j, T(p_k) = p_l: the orientation-preserving
// one, and that one composed with the reflection across line p_i p_k.
RigidPair rigid_motions_mapping(Point2 pi, Point2 pk, Point2 pj, Point2 pl, double tol = 1e-9);

// Samples the arc, maps each sample and checks the underlying curve's
// equation at the image. Inconclusive when fewer than half of the images can
// be evaluated.
bool is_symmetry(const curves::PlanarArc& arc, const Isometry& h, int samples = 50, double tol = 1e-8);

struct SymmetryReport {
  // Lines and circles have infinitely many symmetries; only the family is
  // reported then.
  std::optional<curves::CurveClass> infinite_family;
  std::vector<Isometry> symmetries;  // includes the identity
};

SymmetryReport detect_symmetries(const curves::PlanarArc& arc, int samples = 24, double tol = 1e-8);

// Index pairs (i, j) with T(p_i) = p_j for some symmetry T.
std::vector<std::pair<int, int>> respected_pairs(const std::vector<Isometry>& symmetries,
                                                 const std::vector<Point2>& points, double tol = 1e-9);

}  // namespace pfaffdist::isometry
