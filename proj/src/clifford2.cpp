#include "scrambler/clifford2.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <utility>

namespace scrambler {

uint8_t apply_clifford2_op(Clifford2Op op, uint8_t pauli) {
  uint8_t xa = pauli & 1u, za = (pauli >> 1) & 1u;
  uint8_t xb = (pauli >> 2) & 1u, zb = (pauli >> 3) & 1u;
  uint8_t flip = 0;
  switch (op) {
    case Clifford2Op::HA:
      flip = xa & za;
      std::swap(xa, za);
      break;
    case Clifford2Op::HB:
      flip = xb & zb;
      std::swap(xb, zb);
      break;
    case Clifford2Op::PA:
      flip = xa & za;
      za ^= xa;
      break;
    case Clifford2Op::PB:
      flip = xb & zb;
      zb ^= xb;
      break;
    case Clifford2Op::CZ:
      flip = xa & xb & (za ^ zb);
      za ^= xb;
      zb ^= xa;
      break;
  }
  return static_cast<uint8_t>(xa | (za << 1) | (xb << 2) | (zb << 3) | (flip << 4));
}

const Clifford2Group& Clifford2Group::instance() {
  static const Clifford2Group group;
  return group;
}

Clifford2Group::Clifford2Group() {
  constexpr std::array<Clifford2Op, 5> kGenerators = {
      Clifford2Op::HA, Clifford2Op::HB, Clifford2Op::PA, Clifford2Op::PB,
      Clifford2Op::CZ};

  std::array<uint8_t, 16> identity{};
  for (uint8_t v = 0; v < 16; ++v) identity[v] = v;

  std::map<std::array<uint8_t, 16>, uint32_t> index_of;
  std::vector<std::pair<int32_t, Clifford2Op>> parent;  // BFS tree

  index_of.emplace(identity, 0);
  tables_.push_back(identity);
  parent.emplace_back(-1, Clifford2Op::HA);

  std::deque<uint32_t> queue{0};
  while (!queue.empty()) {
    const uint32_t cur = queue.front();
    queue.pop_front();
    for (Clifford2Op g : kGenerators) {
      // Conjugation by g * C: first C, then g, with sign carried through.
      std::array<uint8_t, 16> next{};
      const auto& table = tables_[cur];
      for (uint8_t v = 0; v < 16; ++v) {
        const uint8_t mid = table[v];
        const uint8_t out = apply_clifford2_op(g, mid & 0x0f);
        next[v] = static_cast<uint8_t>((out & 0x0f) | ((out ^ mid) & 0x10));
      }
      auto [it, inserted] = index_of.emplace(next, static_cast<uint32_t>(tables_.size()));
      if (inserted) {
        tables_.push_back(next);
        parent.emplace_back(static_cast<int32_t>(cur), g);
        queue.push_back(it->second);
      }
    }
  }
  if (tables_.size() != kOrder) {
    throw std::logic_error("two-qubit Clifford enumeration closed at wrong order");
  }

  // Flatten BFS paths into generator words, outermost gate last.
  word_offset_.assign(tables_.size() + 1, 0);
  std::vector<std::vector<Clifford2Op>> seqs(tables_.size());
  for (uint32_t i = 0; i < tables_.size(); ++i) {
    int32_t node = static_cast<int32_t>(i);
    while (parent[node].first >= 0) {
      seqs[i].push_back(parent[node].second);
      node = parent[node].first;
    }
    // Path was collected child-to-root; the root-to-child application order is
    // the reverse, i.e. apply earliest gate first.
    std::reverse(seqs[i].begin(), seqs[i].end());
  }
  for (uint32_t i = 0; i < tables_.size(); ++i) {
    word_offset_[i + 1] = word_offset_[i] + static_cast<uint32_t>(seqs[i].size());
  }
  words_.resize(word_offset_.back());
  for (uint32_t i = 0; i < tables_.size(); ++i) {
    std::copy(seqs[i].begin(), seqs[i].end(), words_.begin() + word_offset_[i]);
  }
}

}  // namespace scrambler
