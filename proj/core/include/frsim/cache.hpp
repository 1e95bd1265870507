#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace frsim {

/// Dense 0/1 matrix, one row per node, one column per segment.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols) : rows_(rows), cols_(cols), bits_(static_cast<std::size_t>(rows) * cols, 0) {}

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }

  [[nodiscard]] bool get(int r, int c) const { return bits_[index(r, c)] != 0; }
  void set(int r, int c, bool v) { bits_[index(r, c)] = v ? 1 : 0; }

  [[nodiscard]] std::span<std::uint8_t> row(int r) {
    return {bits_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  [[nodiscard]] std::span<const std::uint8_t> row(int r) const {
    return {bits_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  [[nodiscard]] int row_count(int r) const;
  void clear() { std::fill(bits_.begin(), bits_.end(), 0); }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  [[nodiscard]] std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

enum class NodeKind { Errh, Helper };

struct NodeRef {
  NodeKind kind = NodeKind::Errh;
  int index = 0;
};

/// Binary caching state. `helper` holds SH rows, or CE-relay rows in the
/// relay variant.
struct CacheState {
  BinaryMatrix errh;
  BinaryMatrix helper;

  CacheState() = default;
  CacheState(int num_errh, int num_helpers, int num_segments)
      : errh(num_errh, num_segments), helper(num_helpers, num_segments) {}

  [[nodiscard]] const BinaryMatrix& of(NodeKind kind) const {
    return kind == NodeKind::Errh ? errh : helper;
  }
  [[nodiscard]] BinaryMatrix& of(NodeKind kind) { return kind == NodeKind::Errh ? errh : helper; }
};

/// Throws std::out_of_range for a bad node or segment index.
bool is_hit(const CacheState& cache, NodeRef node, int segment);

/// Writes `decisions` into `row`. When more than `cap` segments are chosen,
/// keeps the `cap` with the highest `tie_break` value; equal values fall
/// back to `order` (lower rank first) when given, else to the lower index.
void apply_decision(std::span<std::uint8_t> row, std::span<const std::uint8_t> decisions, int cap,
                    std::span<const double> tie_break, std::span<const int> order = {});

void apply_decision(CacheState& cache, NodeRef node, std::span<const std::uint8_t> decisions,
                    int cap, std::span<const double> tie_break, std::span<const int> order = {});

/// A helper may cache a segment it already holds or one it observed
/// (overheard, or relayed) during the previous slot. `observed` is H x F.
bool sh_eligible(int segment, int sh, const BinaryMatrix& observed, const CacheState& cache);

/// One CSV row per node: node_type,node_id,slot,segments (space separated).
void write_cache_snapshot(std::ostream& out, const CacheState& cache, int slot, bool header);

}  // namespace frsim
