#include "lml/triplet_miner.hpp"

#include "lml/errors.hpp"
#include "lml/matrix_io.hpp"
#include "lml/rng.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace lml {
namespace {

std::map<int, std::vector<Index>> class_members(const LabeledDataset& D) {
  std::map<int, std::vector<Index>> members;
  for (Index i = 0; i < D.size(); ++i) {
    members[D.y[static_cast<std::size_t>(i)]].push_back(i);
  }
  return members;
}

void require_two_classes(const std::map<int, std::vector<Index>>& members,
                         const char* op) {
  if (members.size() < 2) {
    throw ConfigError(std::string(op) + ": need >=2 classes, got " +
                      std::to_string(members.size()));
  }
}

}  // namespace

TripletSet mine_triplets(const LabeledDataset& D, int neighbors_per_anchor,
                         int impostors_per_pair, std::uint64_t seed) {
  if (D.size() < 1) throw ConfigError("mine_triplets: empty dataset");
  if (neighbors_per_anchor < 1 || impostors_per_pair < 1) {
    throw ConfigError("mine_triplets: neighbors_per_anchor and "
                      "impostors_per_pair must be >= 1");
  }
  const auto members = class_members(D);
  require_two_classes(members, "mine_triplets");

  // impostor pools per class, ascending
  std::map<int, std::vector<Index>> others;
  for (const auto& [label, _] : members) {
    auto& pool = others[label];
    for (const auto& [other_label, idxs] : members) {
      if (other_label == label) continue;
      pool.insert(pool.end(), idxs.begin(), idxs.end());
    }
    std::sort(pool.begin(), pool.end());
  }

  for (const auto& [label, idxs] : members) {
    if (idxs.size() == 1) {
      log_warning("mine_triplets: class " + std::to_string(label) +
                  " has a single member; no triplets anchored there");
    }
  }

  Rng rng(seed);
  TripletSet out;
  out.source_n = D.size();
  std::vector<std::pair<double, Index>> candidates;
  std::vector<Index> scratch;
  for (Index i = 0; i < D.size(); ++i) {
    const int label = D.y[static_cast<std::size_t>(i)];
    candidates.clear();
    for (Index j : members.at(label)) {
      if (j == i) continue;
      candidates.emplace_back((D.X.row(i) - D.X.row(j)).squaredNorm(), j);
    }
    if (candidates.empty()) continue;
    // pair ordering breaks distance ties by lowest index
    std::sort(candidates.begin(), candidates.end());
    const std::size_t npos =
        std::min<std::size_t>(neighbors_per_anchor, candidates.size());
    const std::vector<Index>& pool = others.at(label);
    for (std::size_t p = 0; p < npos; ++p) {
      const Index j = candidates[p].second;
      if (static_cast<std::size_t>(impostors_per_pair) >= pool.size()) {
        for (Index k : pool) out.triplets.push_back({i, j, k});
        continue;
      }
      // partial Fisher-Yates: distinct impostors in draw order
      scratch = pool;
      for (int c = 0; c < impostors_per_pair; ++c) {
        const std::size_t pick =
            c + rng.uniform_index(scratch.size() - static_cast<std::size_t>(c));
        std::swap(scratch[static_cast<std::size_t>(c)], scratch[pick]);
        out.triplets.push_back({i, j, scratch[static_cast<std::size_t>(c)]});
      }
    }
  }
  return out;
}

TripletSet enumerate_triplets(const LabeledDataset& D) {
  if (D.size() > 200) {
    throw ConfigError("enumerate_triplets: dataset too large (n = " +
                      std::to_string(D.size()) + " > 200); use mine_triplets");
  }
  const auto members = class_members(D);
  require_two_classes(members, "enumerate_triplets");

  TripletSet out;
  out.source_n = D.size();
  for (Index i = 0; i < D.size(); ++i) {
    const int label = D.y[static_cast<std::size_t>(i)];
    for (Index j : members.at(label)) {
      if (j == i) continue;
      for (Index k = 0; k < D.size(); ++k) {
        if (D.y[static_cast<std::size_t>(k)] != label) {
          out.triplets.push_back({i, j, k});
        }
      }
    }
  }
  return out;
}

void save_triplets(const TripletSet& T, std::ostream& out) {
  out << "# n=" << T.source_n << '\n';
  for (const Triplet& t : T.triplets) {
    out << t.anchor << ' ' << t.positive << ' ' << t.negative << '\n';
  }
}

void save_triplets(const TripletSet& T, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  save_triplets(T, out);
}

TripletSet load_triplets(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# n=", 0) != 0) {
    throw ParseError("triplet cache: missing '# n=<count>' header");
  }
  TripletSet out;
  out.source_n = static_cast<Index>(parse_integer(header.substr(4)));
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!(row >> a >> b >> c)) {
      throw ParseError("triplet cache: malformed line " +
                       std::to_string(line_no));
    }
    Triplet t{static_cast<Index>(parse_integer(a)),
              static_cast<Index>(parse_integer(b)),
              static_cast<Index>(parse_integer(c))};
    for (Index idx : {t.anchor, t.positive, t.negative}) {
      if (idx < 0 || idx >= out.source_n) {
        throw ParseError("triplet cache: index " + std::to_string(idx) +
                         " out of range on line " + std::to_string(line_no));
      }
    }
    out.triplets.push_back(t);
  }
  return out;
}

TripletSet load_triplets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open triplet cache: " + path);
  return load_triplets(in);
}

}  // namespace lml
