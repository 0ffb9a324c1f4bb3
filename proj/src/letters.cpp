#include "rauzy/letters.hpp"

#include <algorithm>
#include <sstream>

#include "rauzy/error.hpp"

namespace rauzy {

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Keep: return "keep";
    case Branch::Swap: return "swap";
    case Branch::Cycle: return "cycle";
  }
  return "?";
}

std::array<int, 3> relative_order(Branch b) {
  switch (b) {
    case Branch::Keep: return {1, 2, 3};
    case Branch::Swap: return {2, 1, 3};
    case Branch::Cycle: return {2, 3, 1};
  }
  return {1, 2, 3};
}

Perm3 Perm3::from_labels(int i, int j, int k) {
  Perm3 p;
  p.order = {Letter::from_label(i), Letter::from_label(j), Letter::from_label(k)};
  if (!p.valid()) throw Error(ErrorCode::InvalidArgument, "not a permutation of {1,2,3}");
  return p;
}

Perm3 Perm3::parse(const std::string& text) {
  std::string cleaned;
  for (char ch : text)
    if (ch != '(' && ch != ')' && ch != ' ') cleaned += ch;
  std::istringstream is(cleaned);
  int v[3];
  char sep;
  if (!(is >> v[0] >> sep >> v[1] >> sep >> v[2]))
    throw Error(ErrorCode::InvalidArgument, "cannot parse permutation '" + text + "'");
  for (int x : v)
    if (x < 1 || x > 3) throw Error(ErrorCode::InvalidArgument, "letters are 1, 2, 3");
  return from_labels(v[0], v[1], v[2]);
}

bool Perm3::valid() const {
  std::array<bool, 3> seen{};
  for (Letter l : order) {
    if (l.index() < 0 || l.index() > 2 || seen[static_cast<std::size_t>(l.index())]) return false;
    seen[static_cast<std::size_t>(l.index())] = true;
  }
  return true;
}

Perm3 Perm3::advance(Branch b) const {
  auto rel = relative_order(b);
  Perm3 out;
  for (std::size_t i = 0; i < 3; ++i) out.order[i] = order[static_cast<std::size_t>(rel[i] - 1)];
  return out;
}

int Perm3::rank() const {
  return 2 * order[0].index() + (order[1].index() > order[2].index() ? 1 : 0);
}

Perm3 Perm3::unrank(int r) {
  std::array<int, 3> labels{1, 2, 3};
  for (int i = 0; i < r; ++i) std::next_permutation(labels.begin(), labels.end());
  return from_labels(labels[0], labels[1], labels[2]);
}

std::string Perm3::str() const {
  return "(" + std::to_string(order[0].label()) + "," + std::to_string(order[1].label()) + "," +
         std::to_string(order[2].label()) + ")";
}

}  // namespace rauzy
