#pragma once

// Root-system and Weyl-group engine for simply-laced types, realized in an
// orthonormal coordinate system on the Cartan algebra t.  All roots are
// normalized to squared length 2, so coroots coincide with roots and the
// pairing of an integral weight with a simple root is an exact integer.
//
// Lattice points (integral weights) carry a second, exact representation:
// the vector of integer coordinates in the fundamental-weight basis.  The
// coordinate n_i of a weight lambda is <lambda, alpha_i>, which makes Weyl
// reflections and dominance tests pure integer arithmetic.

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IMat = Eigen::MatrixXi;

/// Integer coordinates of an integral weight in the fundamental-weight basis.
using WeightKey = std::vector<int>;

/// Absolute tolerance for weight-coordinate comparisons.  All constructed
/// weights are integer lattice combinations, so this sits far below the
/// lattice spacing.
inline constexpr double weight_tol = 1e-9;

/// Tolerance for complex coefficient comparisons.
inline constexpr double coeff_tol = 1e-12;

struct WeylElement {
  Mat matrix;             ///< orthogonal action on the coordinate realization of t
  IMat lattice;           ///< the same action on fundamental-weight coordinates (exact)
  int sign = 1;           ///< det(matrix) = (-1)^{length of reduced word}
  std::vector<int> word;  ///< reduced word in simple reflections (BFS-geodesic)
};

class RootSystem {
 public:
  /// Builds the root system of the given type and rank.  Only type "A" is
  /// supported by label; other simply-laced data can be fed through
  /// from_cartan.
  static RootSystem build(const std::string& type, int rank) {
    if (type != "A" && type != "a") {
      throw std::invalid_argument("RootSystem::build: unsupported type label '" + type + "'");
    }
    if (rank < 1) throw std::invalid_argument("RootSystem::build: rank must be >= 1");
    IMat cartan = IMat::Zero(rank, rank);
    for (int i = 0; i < rank; ++i) {
      cartan(i, i) = 2;
      if (i + 1 < rank) {
        cartan(i, i + 1) = -1;
        cartan(i + 1, i) = -1;
      }
    }
    return from_cartan(cartan);
  }

  /// Builds root data from an explicit simply-laced Cartan matrix.
  static RootSystem from_cartan(const IMat& cartan) {
    validate_cartan(cartan);
    return RootSystem(cartan);
  }

  int rank() const { return rank_; }
  int num_positive_roots() const { return static_cast<int>(positive_roots_.size()); }
  const IMat& cartan() const { return cartan_; }
  const Mat& gram() const { return gram_; }

  const std::vector<Vec>& simple_roots() const { return simple_roots_; }
  const std::vector<Vec>& roots() const { return roots_; }
  const std::vector<Vec>& positive_roots() const { return positive_roots_; }
  const std::vector<WeightKey>& positive_root_keys() const { return positive_root_keys_; }

  /// Half the sum of the positive roots; equals the sum of the fundamental
  /// weights, so its lattice coordinates are (1, ..., 1).
  const Vec& delta() const { return delta_; }
  const WeightKey& delta_key() const { return delta_key_; }

  const std::vector<WeylElement>& weyl_elements() const { return weyl_; }
  const WeylElement& weyl_identity() const { return weyl_.front(); }
  int weyl_order() const { return static_cast<int>(weyl_.size()); }

  /// Columns are the fundamental weights in the coordinate realization.
  const Mat& fundamental_weights() const { return fundamental_; }

  double inner(const Vec& v, const Vec& w) const {
    if (v.size() != rank_ || w.size() != rank_) {
      throw std::invalid_argument("RootSystem::inner: dimension mismatch");
    }
    return v.dot(w);
  }

  /// Reflection in the hyperplane perpendicular to a root:
  /// s_alpha(v) = v - <v, alpha> alpha under the length-2 normalization.
  Vec reflect(const Vec& alpha, const Vec& v) const {
    if (!is_root(alpha)) {
      throw std::invalid_argument("RootSystem::reflect: alpha is not a root");
    }
    return v - v.dot(alpha) * alpha;
  }

  Vec simple_reflect(int i, const Vec& v) const {
    return v - v.dot(simple_roots_[i]) * simple_roots_[i];
  }

  bool is_root(const Vec& alpha) const {
    for (const Vec& r : roots_) {
      if ((r - alpha).lpNorm<Eigen::Infinity>() <= weight_tol) return true;
    }
    return false;
  }

  /// Coordinate realization of a lattice point.
  Vec weight(const WeightKey& k) const {
    check_key(k);
    Vec v = Vec::Zero(rank_);
    for (int i = 0; i < rank_; ++i) v += static_cast<double>(k[i]) * fundamental_.col(i);
    return v;
  }

  /// Lattice coordinates of an integral weight; throws if v is not integral.
  WeightKey key(const Vec& v) const {
    if (v.size() != rank_) throw std::invalid_argument("RootSystem::key: dimension mismatch");
    WeightKey k(rank_);
    for (int i = 0; i < rank_; ++i) {
      const double p = v.dot(simple_roots_[i]);
      const double rounded = std::round(p);
      if (std::abs(p - rounded) > weight_tol) {
        throw std::invalid_argument("RootSystem::key: weight is not integral");
      }
      k[i] = static_cast<int>(rounded);
    }
    return k;
  }

  bool is_integral(const Vec& v) const {
    if (v.size() != rank_) return false;
    for (int i = 0; i < rank_; ++i) {
      const double p = v.dot(simple_roots_[i]);
      if (std::abs(p - std::round(p)) > weight_tol) return false;
    }
    return true;
  }

  Vec apply(const WeylElement& w, const Vec& v) const { return w.matrix * v; }

  WeightKey apply(const WeylElement& w, const WeightKey& k) const {
    check_key(k);
    WeightKey out(rank_, 0);
    for (int i = 0; i < rank_; ++i) {
      long acc = 0;
      for (int j = 0; j < rank_; ++j) acc += static_cast<long>(w.lattice(i, j)) * k[j];
      out[i] = static_cast<int>(acc);
    }
    return out;
  }

  /// Squared norm of a lattice point, computed through the inverse Cartan
  /// matrix (the Gram matrix of the fundamental weights).
  double norm_sq(const WeightKey& k) const {
    check_key(k);
    double acc = 0.0;
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) acc += fw_gram_(i, j) * k[i] * k[j];
    return acc;
  }

  static bool is_dominant(const WeightKey& k) {
    for (int n : k)
      if (n < 0) return false;
    return true;
  }
  static bool is_strictly_dominant(const WeightKey& k) {
    for (int n : k)
      if (n < 1) return false;
    return true;
  }

  struct DominantResult {
    Vec weight;
    const WeylElement* element;  ///< element->matrix * input = weight
    bool on_wall;
  };

  /// Moves lambda into the closed fundamental chamber by simple reflections.
  DominantResult dominant_representative(const Vec& lambda) const {
    if (lambda.size() != rank_) {
      throw std::invalid_argument("dominant_representative: dimension mismatch");
    }
    Vec v = lambda;
    IMat acc = IMat::Identity(rank_, rank_);
    long guard = static_cast<long>(weyl_.size()) * rank_ + 16;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int i = 0; i < rank_; ++i) {
        if (v.dot(simple_roots_[i]) < -weight_tol) {
          v = simple_reflect(i, v);
          acc = simple_lattice_[i] * acc;
          progressed = true;
          if (--guard < 0) throw std::runtime_error("dominant_representative: no convergence");
          break;
        }
      }
    }
    bool wall = false;
    for (int i = 0; i < rank_; ++i) {
      if (std::abs(v.dot(simple_roots_[i])) <= weight_tol) wall = true;
    }
    return DominantResult{v, find_element(acc), wall};
  }

  struct DominantKeyResult {
    WeightKey weight;
    const WeylElement* element;
    bool on_wall;
  };

  /// Exact integer version of dominant_representative for lattice points.
  DominantKeyResult dominant_representative(const WeightKey& lambda) const {
    check_key(lambda);
    WeightKey k = lambda;
    IMat acc = IMat::Identity(rank_, rank_);
    long guard = static_cast<long>(weyl_.size()) * rank_ + 16;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int i = 0; i < rank_; ++i) {
        if (k[i] < 0) {
          k = apply_simple(i, k);
          acc = simple_lattice_[i] * acc;
          progressed = true;
          if (--guard < 0) throw std::runtime_error("dominant_representative: no convergence");
          break;
        }
      }
    }
    bool wall = false;
    for (int n : k)
      if (n == 0) wall = true;
    return DominantKeyResult{k, find_element(acc), wall};
  }

  /// All dominant lattice points with coordinate sum at most max_level, in
  /// lexicographic order.
  static std::vector<WeightKey> dominant_weights(int rank, int max_level) {
    std::vector<WeightKey> out;
    WeightKey k(rank, 0);
    std::function<void(int, int)> rec = [&](int pos, int budget) {
      if (pos == rank) {
        out.push_back(k);
        return;
      }
      for (int v = 0; v <= budget; ++v) {
        k[pos] = v;
        rec(pos + 1, budget - v);
      }
      k[pos] = 0;
    };
    rec(0, max_level);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Looks up the stored Weyl element with the given lattice action.
  const WeylElement* find_element(const IMat& lattice) const {
    auto it = weyl_index_.find(flatten(lattice));
    if (it == weyl_index_.end()) {
      throw std::runtime_error("RootSystem: lattice matrix is not a Weyl element");
    }
    return &weyl_[it->second];
  }

 private:
  explicit RootSystem(const IMat& cartan) : cartan_(cartan), rank_(static_cast<int>(cartan.rows())) {
    gram_ = cartan_.cast<double>();
    Eigen::LLT<Mat> llt(gram_);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("RootSystem: Cartan matrix is not positive definite");
    }
    const Mat L = llt.matrixL();
    simple_roots_.reserve(rank_);
    for (int i = 0; i < rank_; ++i) simple_roots_.push_back(L.row(i).transpose());

    fw_gram_ = gram_.inverse();
    Mat simple_cols(rank_, rank_);
    for (int i = 0; i < rank_; ++i) simple_cols.col(i) = simple_roots_[i];
    fundamental_ = simple_cols * fw_gram_.transpose();  // <fw_i, alpha_j> = delta_ij

    // Lattice action of the simple reflections: n_j -> n_j - C(i,j) n_i.
    simple_lattice_.assign(rank_, IMat::Identity(rank_, rank_));
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) simple_lattice_[i](j, i) -= cartan_(i, j);

    enumerate_roots();
    enumerate_weyl();

    delta_key_.assign(rank_, 1);
    delta_ = weight(delta_key_);
  }

  static void validate_cartan(const IMat& cartan) {
    if (cartan.rows() != cartan.cols() || cartan.rows() < 1) {
      throw std::invalid_argument("RootSystem: Cartan matrix must be square and nonempty");
    }
    for (int i = 0; i < cartan.rows(); ++i) {
      if (cartan(i, i) != 2) throw std::invalid_argument("RootSystem: Cartan diagonal must be 2");
      for (int j = 0; j < cartan.cols(); ++j) {
        if (i == j) continue;
        if (cartan(i, j) != cartan(j, i) || (cartan(i, j) != 0 && cartan(i, j) != -1)) {
          throw std::invalid_argument("RootSystem: only simply-laced Cartan matrices are supported");
        }
      }
    }
  }

  void check_key(const WeightKey& k) const {
    if (static_cast<int>(k.size()) != rank_) {
      throw std::invalid_argument("RootSystem: lattice coordinate dimension mismatch");
    }
  }

  WeightKey apply_simple(int i, const WeightKey& k) const {
    WeightKey out = k;
    for (int j = 0; j < rank_; ++j) out[j] -= cartan_(i, j) * k[i];
    return out;
  }

  static std::vector<int> flatten(const IMat& m) {
    std::vector<int> f;
    f.reserve(static_cast<size_t>(m.size()));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) f.push_back(m(i, j));
    return f;
  }

  void enumerate_roots() {
    // Close the simple roots under simple reflections; exact on the lattice.
    std::map<WeightKey, bool> seen;
    std::vector<WeightKey> frontier;
    for (int i = 0; i < rank_; ++i) {
      WeightKey k(rank_);
      for (int j = 0; j < rank_; ++j) k[j] = cartan_(i, j);
      frontier.push_back(k);
    }
    while (!frontier.empty()) {
      WeightKey k = frontier.back();
      frontier.pop_back();
      if (seen.count(k)) continue;
      seen[k] = true;
      for (int i = 0; i < rank_; ++i) frontier.push_back(apply_simple(i, k));
    }
    // A root is positive exactly when its expansion in simple roots has
    // nonnegative coefficients; its pairing with delta is then positive.
    std::vector<WeightKey> pos;
    for (const auto& [k, unused] : seen) {
      double height = 0.0;
      for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j) height += fw_gram_(i, j) * k[i];
      if (height > 0) pos.push_back(k);
    }
    positive_root_keys_ = pos;
    for (const auto& k : pos) positive_roots_.push_back(weight(k));
    roots_ = positive_roots_;
    for (const auto& k : pos) {
      WeightKey neg(k);
      for (int& n : neg) n = -n;
      roots_.push_back(weight(neg));
    }
    if (roots_.size() != seen.size()) {
      throw std::runtime_error("RootSystem: root enumeration is not symmetric");
    }
  }

  void enumerate_weyl() {
    constexpr size_t weyl_cap = 50000;  // desk scale; (r+1)! for type A
    WeylElement id;
    id.matrix = Mat::Identity(rank_, rank_);
    id.lattice = IMat::Identity(rank_, rank_);
    id.sign = 1;
    weyl_.push_back(id);
    weyl_index_[flatten(id.lattice)] = 0;

    Mat p = fundamental_;          // lattice coords -> realization coords
    Mat p_inv = p.inverse();
    std::vector<Mat> simple_orth(rank_);
    for (int i = 0; i < rank_; ++i) {
      simple_orth[i] = p * simple_lattice_[i].cast<double>() * p_inv;
    }

    size_t head = 0;
    while (head < weyl_.size()) {
      const WeylElement current = weyl_[head++];
      for (int i = 0; i < rank_; ++i) {
        IMat lat = simple_lattice_[i] * current.lattice;
        auto f = flatten(lat);
        if (weyl_index_.count(f)) continue;
        WeylElement next;
        next.lattice = lat;
        next.matrix = simple_orth[i] * current.matrix;
        next.sign = -current.sign;
        next.word = current.word;
        next.word.insert(next.word.begin(), i);  // next = s_i * current
        weyl_index_[f] = weyl_.size();
        weyl_.push_back(std::move(next));
        if (weyl_.size() > weyl_cap) {
          throw std::runtime_error("RootSystem: Weyl group exceeds supported size");
        }
      }
    }
  }

  IMat cartan_;
  int rank_;
  Mat gram_;
  Mat fw_gram_;  // Gram matrix of the fundamental weights = inverse Cartan
  Mat fundamental_;
  std::vector<Vec> simple_roots_;
  std::vector<Vec> roots_;
  std::vector<Vec> positive_roots_;
  std::vector<WeightKey> positive_root_keys_;
  std::vector<IMat> simple_lattice_;
  Vec delta_;
  WeightKey delta_key_;
  std::vector<WeylElement> weyl_;
  std::map<std::vector<int>, size_t> weyl_index_;
};

}  // namespace qcr
