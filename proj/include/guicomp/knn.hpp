#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "guicomp/errors.hpp"

namespace guicomp {

struct Neighbor {
  std::string id;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

namespace knn {

inline double norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(s);
}

inline double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

// 1 - cos; zero-norm vectors are at distance 1 from everything.
inline double distance_from_parts(double dot, double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 1.0;
  return std::clamp(1.0 - dot / (norm_a * norm_b), 0.0, 2.0);
}

inline bool closer(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.id < b.id;
}

inline void keep_best(std::vector<Neighbor>& all, std::size_t k) {
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  all.resize(k);
}

}  // namespace knn

inline double cosine_distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ArgumentError("cosine_distance: dimension mismatch");
  return knn::distance_from_parts(knn::dot(a, b), knn::norm(a), knn::norm(b));
}

struct IndexedVector {
  std::string id;
  std::vector<float> values;
};

// Exhaustive cosine search. Results ascend by distance, ties by id.
inline std::vector<Neighbor> knn_query(std::span<const float> query,
                                       const std::vector<IndexedVector>& index, std::size_t k) {
  std::vector<Neighbor> all;
  all.reserve(index.size());
  for (const auto& item : index) all.push_back({item.id, cosine_distance(query, item.values)});
  knn::keep_best(all, k);
  return all;
}

// Brute-force index with cached norms; immutable once built.
class CosineIndex {
 public:
  CosineIndex() = default;
  explicit CosineIndex(std::size_t dim) : dim_(dim) {}

  void add(std::string id, std::vector<float> values) {
    if (values.size() != dim_) throw ArgumentError("CosineIndex: dimension mismatch");
    norms_.push_back(knn::norm(values));
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), values.begin(), values.end());
  }

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  std::span<const float> vector(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * dim_, dim_);
  }

  double distance(std::span<const float> query, std::size_t i) const {
    return knn::distance_from_parts(knn::dot(query, vector(i)), knn::norm(query), norms_[i]);
  }

  // `admit(i)` restricts the search to a subset of rows.
  std::vector<Neighbor> query(std::span<const float> q, std::size_t k,
                              const std::function<bool(std::size_t)>& admit = {}) const {
    if (q.size() != dim_) throw ArgumentError("CosineIndex: query dimension mismatch");
    const double qn = knn::norm(q);
    std::vector<Neighbor> all;
    all.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (admit && !admit(i)) continue;
      all.push_back({ids_[i], knn::distance_from_parts(knn::dot(q, vector(i)), qn, norms_[i])});
    }
    knn::keep_best(all, k);
    return all;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::vector<double> norms_;
};

}  // namespace guicomp
