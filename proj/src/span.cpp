#include "scaffold/span.hpp"

#include <algorithm>

namespace scaffold {

std::vector<Span> enumerate_spans(int n, int D) {
  std::vector<Span> spans;
  spans.reserve(enumerated_span_count(n, D));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= std::min(n, i + D - 1); ++j)
      spans.push_back({i, j});
  return spans;
}

std::size_t enumerated_span_count(int n, int D) {
  std::size_t count = 0;
  for (int w = 1; w <= std::min(n, D); ++w)
    count += static_cast<std::size_t>(n - w + 1);
  return count;
}

int width_bucket(int w) {
  if (w <= 4) return w - 1;
  if (w <= 7) return 4;
  if (w <= 15) return 5;
  return 6;
}

int distance_bucket(int d) {
  if (d <= 3) return d;
  if (d <= 7) return 4;
  if (d <= 15) return 5;
  if (d <= 31) return 6;
  return 7;
}

int token_gap(const Span& a, const Span& b) {
  if (a.overlaps(b)) return 0;
  return a.j < b.i ? b.i - a.j - 1 : a.i - b.j - 1;
}

SpanPosition span_position(const Span& s, const Span& target) {
  if (s.overlaps(target)) return SpanPosition::kOverlap;
  return s.j < target.i ? SpanPosition::kBefore : SpanPosition::kAfter;
}

}  // namespace scaffold
