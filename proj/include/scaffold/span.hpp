#pragma once

#include <compare>
#include <vector>

namespace scaffold {

// Contiguous token span, 1-based inclusive on both ends.
struct Span {
  int i = 1;
  int j = 1;

  int width() const { return j - i + 1; }
  bool contains(int k) const { return i <= k && k <= j; }
  bool overlaps(const Span& o) const { return i <= o.j && o.i <= j; }
  auto operator<=>(const Span&) const = default;
};

// All spans of width <= D over n tokens, sorted by (i, j).
std::vector<Span> enumerate_spans(int n, int D);

// nD - D(D-1)/2 for n >= D
std::size_t enumerated_span_count(int n, int D);

// Buckets: width {1,2,3,4,5-7,8-15,16+}  -> 0..6
int width_bucket(int w);
// distance {0,1,2,3,4-7,8-15,16-31,32+} -> 0..7
int distance_bucket(int d);

// Tokens strictly between the two spans; 0 when adjacent or overlapping.
int token_gap(const Span& a, const Span& b);

enum class SpanPosition { kBefore = 0, kAfter = 1, kOverlap = 2 };

// Position of `s` relative to `target`; overlap means any shared token.
SpanPosition span_position(const Span& s, const Span& target);

}  // namespace scaffold
