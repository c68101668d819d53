#include "sawsle/lattice_walk.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "sawsle/errors.hpp"

namespace sawsle {

bool validate_walk(std::span<const Site> sites) {
  if (sites.empty() || sites[0] != Site{0, 0}) return false;
  std::unordered_set<Site> seen;
  seen.reserve(sites.size());
  seen.insert(sites[0]);
  for (std::size_t i = 1; i < sites.size(); ++i) {
    const Site d = sites[i] - sites[i - 1];
    if (std::abs(d.x) + std::abs(d.y) != 1) return false;
    if (!in_open_half_plane(sites[i])) return false;
    if (!seen.insert(sites[i]).second) return false;
  }
  return true;
}

bool validate_walk(const LatticeWalk& walk) { return validate_walk(walk.sites()); }

namespace {

constexpr Site kSteps[4] = {{0, 1}, {1, 0}, {-1, 0}, {0, -1}};

void extend(std::vector<Site>& path, std::unordered_set<Site>& used, std::size_t remaining,
            std::vector<LatticeWalk>& out) {
  if (remaining == 0) {
    out.emplace_back(path);
    return;
  }
  for (const Site step : kSteps) {
    const Site next = path.back() + step;
    if (!in_open_half_plane(next) || used.contains(next)) continue;
    path.push_back(next);
    used.insert(next);
    extend(path, used, remaining - 1, out);
    used.erase(next);
    path.pop_back();
  }
}

}  // namespace

std::vector<LatticeWalk> enumerate_half_plane_saws(std::size_t steps) {
  if (steps > kMaxEnumerationSteps) {
    throw std::invalid_argument("enumerate_half_plane_saws: N=" + std::to_string(steps) +
                                " exceeds cap " + std::to_string(kMaxEnumerationSteps));
  }
  std::vector<LatticeWalk> out;
  std::vector<Site> path{{0, 0}};
  std::unordered_set<Site> used{{0, 0}};
  extend(path, used, steps, out);
  return out;
}

LatticeWalk initial_walk(std::size_t steps) {
  std::vector<Site> sites(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) sites[i] = {0, static_cast<std::int32_t>(i)};
  return LatticeWalk(std::move(sites));
}

void write_walk(std::ostream& os, const LatticeWalk& walk) {
  os << "sawsle-walk v1 N=" << walk.steps() << '\n';
  for (const Site s : walk.sites()) os << s.x << ' ' << s.y << '\n';
}

LatticeWalk read_walk(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("walk: missing header");
  const std::string prefix = "sawsle-walk v1 N=";
  if (line.rfind("sawsle-walk ", 0) != 0) throw FormatError("walk: bad header '" + line + "'");
  if (line.rfind(prefix, 0) != 0) throw FormatError("walk: unsupported version in '" + line + "'");
  std::size_t steps = 0;
  try {
    std::size_t used = 0;
    steps = std::stoull(line.substr(prefix.size()), &used);
    if (prefix.size() + used != line.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw FormatError("walk: bad step count in '" + line + "'");
  }
  std::vector<Site> sites;
  sites.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    if (!std::getline(is, line)) throw FormatError("walk: truncated coordinate list");
    std::istringstream ls(line);
    Site s;
    std::string rest;
    if (!(ls >> s.x >> s.y) || (ls >> rest)) throw FormatError("walk: bad coordinate line '" + line + "'");
    sites.push_back(s);
  }
  return LatticeWalk(std::move(sites));
}

}  // namespace sawsle
