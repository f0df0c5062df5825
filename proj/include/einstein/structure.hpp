#pragma once

#include <map>
#include <optional>
#include <vector>

#include "einstein/algebra.hpp"

namespace einstein {

using Triple = std::array<int, 3>;

inline Triple b_key(int k, int i, int j) {
  Triple t{k, i, j};
  std::sort(t.begin(), t.end());
  return t;
}
inline Triple q_key(int k, int i, int j) {
  return Triple{k, std::min(i, j), std::max(i, j)};
}

/// Structure-constant table over the eight blocks. B-tables are fully
/// symmetric and exact rational; Q-tables are symmetric in the lower pair
/// only and live in Q(sqrt(l m n N)) for rational gauges.
struct BTable {
  FlagSpec spec;
  SpaceKind space = SpaceKind::Group;
  std::map<Triple, Rat> entries;

  Rat get(int k, int i, int j) const {
    auto it = entries.find(b_key(k, i, j));
    return it == entries.end() ? Rat(0) : it->second;
  }
};

struct QTable {
  FlagSpec spec;
  SpaceKind space = SpaceKind::Group;
  GaugeQ gauge;
  std::map<Triple, Quad> entries;

  Quad get(int k, int i, int j) const {
    auto it = entries.find(q_key(k, i, j));
    return it == entries.end() ? Quad(Rat(0)) : it->second;
  }
};

struct QTableD {
  FlagSpec spec;
  SpaceKind space = SpaceKind::Group;
  Gauge gauge;
  std::map<Triple, double> entries;

  double get(int k, int i, int j) const {
    auto it = entries.find(q_key(k, i, j));
    return it == entries.end() ? 0.0 : it->second;
  }
};

/// Precomputed bracket tensor over the flat B-orthonormal basis of su(N):
/// for each pair a < b the sparse list of (c, t_abc) with
/// B([e_a, e_b], e_c) = t_abc / sqrt(bn_a bn_b bn_c), t_abc integer.
struct StructureTensor {
  FlagSpec spec;
  Decomposition dec;
  int dim = 0;
  std::vector<int> block_of;   // flat index -> block id
  std::vector<Int> bn;         // flat index -> exact B(M, M)
  std::vector<double> invsq;   // flat index -> 1/sqrt(bn)
  std::array<int, 9> block_lo{}, block_hi{};  // flat ranges per block

  struct Entry {
    int c;
    long long t;
    double val;  // t * invsq_a * invsq_b * invsq_c
  };
  // indexed by pair_index(a, b) for a < b
  std::vector<std::vector<Entry>> pairs;

  size_t pair_index(int a, int b) const { return size_t(a) * dim + b; }
  const std::vector<Entry>& list(int a, int b) const { return pairs[pair_index(a, b)]; }
};

StructureTensor build_structure_tensor(const FlagSpec& spec);

BTable b_constants_closed(const FlagSpec& spec, SpaceKind space = SpaceKind::Group);
BTable b_constants_brute(const StructureTensor& st, SpaceKind space = SpaceKind::Group);
inline BTable b_constants_brute(const Decomposition& dec, SpaceKind space = SpaceKind::Group) {
  return b_constants_brute(build_structure_tensor(dec.spec), space);
}

QTable q_constants_closed(const FlagSpec& spec, const GaugeQ& gauge,
                          SpaceKind space = SpaceKind::Group);
QTableD q_constants_brute(const StructureTensor& st, const Gauge& gauge,
                          SpaceKind space = SpaceKind::Group);
inline QTableD q_constants_brute(const Decomposition& dec, const Gauge& gauge,
                                 SpaceKind space = SpaceKind::Group) {
  return q_constants_brute(build_structure_tensor(dec.spec), gauge, space);
}

}  // namespace einstein
