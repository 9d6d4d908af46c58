#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace higgs {

// Weakly decreasing list of positive parts.
using Partition = std::vector<int>;

inline int partition_size(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

// All partitions of n, in reverse lexicographic order ((n) first).
inline std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  if (n < 0) return out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

inline long long partition_count(int n) {
  if (n < 0) return 0;
  std::vector<long long> p(n + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int s = part; s <= n; ++s) p[s] += p[s - part];
  return p[n];
}

inline Partition conjugate(const Partition& p) {
  Partition c;
  if (p.empty()) return c;
  for (int i = 1; i <= p[0]; ++i) {
    int cnt = 0;
    for (int x : p)
      if (x >= i) ++cnt;
    c.push_back(cnt);
  }
  return c;
}

// a dominates b (same size assumed): every prefix sum of a >= that of b.
inline bool dominates(const Partition& a, const Partition& b) {
  int sa = 0, sb = 0;
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    sa += i < a.size() ? a[i] : 0;
    sb += i < b.size() ? b[i] : 0;
    if (sa < sb) return false;
  }
  return true;
}

// Young diagram containment a ⊆ b.
inline bool contained_in(const Partition& a, const Partition& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline std::string partition_str(const Partition& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

inline Partition normalize_partition(Partition p) {
  p.erase(std::remove(p.begin(), p.end(), 0), p.end());
  std::sort(p.rbegin(), p.rend());
  return p;
}

// Weakly decreasing integer vectors of length r, entries >= lo, sum s.
inline std::vector<std::vector<int>> int_partitions(int r, int s, int lo) {
  std::vector<std::vector<int>> out;
  if (r == 0) {
    if (s == 0) out.push_back({});
    return out;
  }
  long long shifted = static_cast<long long>(s) - static_cast<long long>(r) * lo;
  if (shifted < 0) return out;
  std::vector<int> cur;
  // parts of the shifted partition are >= 0; allow zeros
  std::function<void(int, int, int)> rec = [&](int idx, int rest, int maxpart) {
    if (idx == r) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    int remaining = r - idx;
    for (int p = std::min(rest, maxpart); p >= 0; --p) {
      if (static_cast<long long>(p) * remaining < rest) break;
      cur.push_back(p + lo);
      rec(idx + 1, rest - p, p);
      cur.pop_back();
    }
  };
  rec(0, int(shifted), int(shifted));
  return out;
}

}  // namespace higgs
