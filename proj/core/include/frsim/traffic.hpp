#pragma once

#include <optional>
#include <vector>

#include "frsim/random.hpp"

namespace frsim {

/// Zipf popularity over segments 0..F-1; index 0 is the most popular.
struct Catalog {
  std::vector<double> popularity;
  std::vector<double> cumulative;
  double gamma = 0.0;

  [[nodiscard]] int size() const { return static_cast<int>(popularity.size()); }
  /// Inverse-CDF draw of a segment index.
  [[nodiscard]] int sample(Rng& rng) const;
};

Catalog build_catalog(int num_segments, double gamma);

struct Request {
  /// Segment index when the request is for popular content; empty for
  /// unpopular content, which is uncacheable and always fetched from the MBS.
  std::optional<int> segment;

  [[nodiscard]] bool is_popular() const { return segment.has_value(); }
};

struct RequestBatch {
  std::vector<Request> requests;  // one per user
  int slot_index = 0;
};

RequestBatch draw_requests(const Catalog& catalog, int num_users, double popular_prob, Rng& rng,
                           int slot_index = 0);

}  // namespace frsim
