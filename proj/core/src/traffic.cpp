#include "frsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frsim {

Catalog build_catalog(int num_segments, double gamma) {
  if (num_segments < 1) throw std::domain_error("build_catalog: need at least one segment");
  if (!(gamma >= 0.0)) throw std::domain_error("build_catalog: gamma must be >= 0");

  Catalog c;
  c.gamma = gamma;
  c.popularity.resize(num_segments);
  double total = 0.0;
  for (int f = 0; f < num_segments; ++f) {
    c.popularity[f] = std::pow(static_cast<double>(f + 1), -gamma);
    total += c.popularity[f];
  }
  c.cumulative.resize(num_segments);
  double running = 0.0;
  for (int f = 0; f < num_segments; ++f) {
    c.popularity[f] /= total;
    running += c.popularity[f];
    c.cumulative[f] = running;
  }
  return c;
}

int Catalog::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double target = unit(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<int>(it - cumulative.begin());
}

RequestBatch draw_requests(const Catalog& catalog, int num_users, double popular_prob, Rng& rng, int slot_index) {
  RequestBatch batch;
  batch.slot_index = slot_index;
  batch.requests.resize(num_users);
  std::bernoulli_distribution popular(popular_prob);
  for (auto& req : batch.requests) {
    if (popular(rng)) req.segment = catalog.sample(rng);
  }
  return batch;
}

}  // namespace frsim
