#include "frsim/cache.hpp"

#include <numeric>
#include <stdexcept>

namespace frsim {

int BinaryMatrix::row_count(int r) const {
  auto bits = row(r);
  return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

bool is_hit(const CacheState& cache, NodeRef node, int segment) {
  const auto& m = cache.of(node.kind);
  if (node.index < 0 || node.index >= m.rows()) throw std::out_of_range("is_hit: node index out of range");
  if (segment < 0 || segment >= m.cols()) throw std::out_of_range("is_hit: segment index out of range");
  return m.get(node.index, segment);
}

void apply_decision(std::span<std::uint8_t> row, std::span<const std::uint8_t> decisions, int cap,
                    std::span<const double> tie_break, std::span<const int> order) {
  if (decisions.size() != row.size()) throw std::invalid_argument("apply_decision: size mismatch");
  int chosen = 0;
  for (auto d : decisions) chosen += d != 0;
  if (chosen <= cap) {
    for (std::size_t f = 0; f < row.size(); ++f) row[f] = decisions[f] != 0;
    return;
  }
  if (tie_break.size() != row.size()) throw std::invalid_argument("apply_decision: tie_break size mismatch");

  std::vector<int> picked;
  picked.reserve(chosen);
  for (std::size_t f = 0; f < decisions.size(); ++f)
    if (decisions[f] != 0) picked.push_back(static_cast<int>(f));

  auto better = [&](int a, int b) {
    if (tie_break[a] != tie_break[b]) return tie_break[a] > tie_break[b];
    if (!order.empty() && order[a] != order[b]) return order[a] < order[b];
    return a < b;
  };
  const int keep = std::max(cap, 0);
  std::partial_sort(picked.begin(), picked.begin() + keep, picked.end(), better);

  std::fill(row.begin(), row.end(), std::uint8_t{0});
  for (int i = 0; i < keep; ++i) row[picked[i]] = 1;
}

void apply_decision(CacheState& cache, NodeRef node, std::span<const std::uint8_t> decisions, int cap,
                    std::span<const double> tie_break, std::span<const int> order) {
  auto& m = cache.of(node.kind);
  if (node.index < 0 || node.index >= m.rows()) throw std::out_of_range("apply_decision: node index out of range");
  apply_decision(m.row(node.index), decisions, cap, tie_break, order);
}

bool sh_eligible(int segment, int sh, const BinaryMatrix& observed, const CacheState& cache) {
  return cache.helper.get(sh, segment) || observed.get(sh, segment);
}

void write_cache_snapshot(std::ostream& out, const CacheState& cache, int slot, bool header) {
  if (header) out << "node_type,node_id,slot,segments\n";
  auto emit = [&](const BinaryMatrix& m, const char* kind) {
    for (int n = 0; n < m.rows(); ++n) {
      out << kind << ',' << n << ',' << slot << ',';
      bool first = true;
      for (int f = 0; f < m.cols(); ++f) {
        if (!m.get(n, f)) continue;
        if (!first) out << ' ';
        out << f;
        first = false;
      }
      out << '\n';
    }
  };
  emit(cache.errh, "errh");
  emit(cache.helper, "helper");
}

}  // namespace frsim
