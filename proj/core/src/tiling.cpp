#include "picwb/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "json.hpp"

namespace picwb {

void validate(const TilingSystem& ts) {
  validate_alphabet(ts.sigma);
  validate_alphabet(ts.gamma);
  if (ts.sigma.empty() || ts.gamma.empty()) throw Error("tiling system needs nonempty alphabets");
  std::set<std::string> g(ts.gamma.begin(), ts.gamma.end()), s(ts.sigma.begin(), ts.sigma.end()), hit;
  for (auto& c : ts.gamma) {
    auto it = ts.pi.find(c);
    if (it == ts.pi.end()) throw Error("projection undefined on '" + c + "'");
    if (!s.count(it->second)) throw Error("projection of '" + c + "' is not an input symbol");
    hit.insert(it->second);
  }
  if (ts.pi.size() != ts.gamma.size()) throw Error("projection defined outside the auxiliary alphabet");
  if (hit.size() != s.size()) throw Error("projection is not surjective");
  if (ts.deltas.empty()) throw Error("tiling system needs at least one tile set");
  for (std::size_t j = 0; j < ts.deltas.size(); ++j) {
    if (ts.deltas[j].j != static_cast<int>(j) + 1) throw Error("tile sets must be tagged 1..d in order");
    for (auto& [u, v] : ts.deltas[j].tiles)
      if ((u != kBorder && !g.count(u)) || (v != kBorder && !g.count(v))) throw Error("tile uses an unknown color");
  }
}

namespace {

// Tile tables over color codes; code k = border.
struct Tables {
  int k = 0, d = 0, words = 1;
  std::vector<std::vector<std::uint8_t>> ok;        // ok[j][u*(k+1)+v]
  std::vector<std::vector<std::uint64_t>> follow;   // follow[j][u*words..] = colors v allowed after u
  bool corner = true;

  Tables(const Alphabet& gamma, const Deltas& deltas) : k(static_cast<int>(gamma.size())), d(static_cast<int>(deltas.size())) {
    words = (k + 63) / 64;
    auto code = [&](const std::string& s) -> int {
      if (s == kBorder) return k;
      auto it = std::find(gamma.begin(), gamma.end(), s);
      return it == gamma.end() ? -1 : static_cast<int>(it - gamma.begin());
    };
    ok.assign(d, std::vector<std::uint8_t>((k + 1) * (k + 1), 0));
    follow.assign(d, std::vector<std::uint64_t>(static_cast<std::size_t>(k + 1) * words, 0));
    for (int j = 0; j < d; ++j) {
      for (auto& [u, v] : deltas[j].tiles) {
        int a = code(u), b = code(v);
        if (a < 0 || b < 0) continue;
        ok[j][a * (k + 1) + b] = 1;
        if (b < k) follow[j][static_cast<std::size_t>(a) * words + b / 64] |= std::uint64_t{1} << (b % 64);
      }
      if (d >= 2 && !ok[j][k * (k + 1) + k]) corner = false;
    }
  }
  bool allowed(int j, int u, int v) const { return ok[j][u * (k + 1) + v]; }
};

// Backtracking over cells in lexicographic order with forward checking of j-successors.
class Search {
 public:
  Search(const Tables& t, int d, int n, std::vector<std::vector<std::uint64_t>> domains)
      : t_(t), d_(d), n_(n), dom_(std::move(domains)), val_(dom_.size(), -1) {}

  bool run(const std::function<bool(const std::vector<int>&)>& on_solution) {
    if (!t_.corner) return false;
    cb_ = &on_solution;
    stop_ = false;
    dfs(0);
    return found_;
  }

 private:
  void dfs(std::size_t r) {
    if (r == dom_.size()) {
      found_ = true;
      if (!(*cb_)(val_)) stop_ = true;
      return;
    }
    Cell a = cell_of_rank(r, d_, n_);
    for (int w = 0; w < t_.words && !stop_; ++w) {
      std::uint64_t bits = dom_[r][w];
      while (bits && !stop_) {
        int g = w * 64 + __builtin_ctzll(bits);
        bits &= bits - 1;
        std::vector<std::pair<std::size_t, std::vector<std::uint64_t>>> saved;
        bool dead = false;
        std::size_t stride = 1;
        for (int j = d_ - 1; j >= 0; --j, stride *= n_) {
          if (a[j] == n_) continue;
          std::size_t q = r + stride;
          saved.emplace_back(q, dom_[q]);
          bool any = false;
          for (int x = 0; x < t_.words; ++x) {
            dom_[q][x] &= t_.follow[j][static_cast<std::size_t>(g) * t_.words + x];
            any |= dom_[q][x] != 0;
          }
          if (!any) {
            dead = true;
            break;
          }
        }
        if (!dead) {
          val_[r] = g;
          dfs(r + 1);
        }
        for (auto it = saved.rbegin(); it != saved.rend(); ++it) dom_[it->first] = std::move(it->second);
      }
    }
  }

  const Tables& t_;
  int d_, n_;
  std::vector<std::vector<std::uint64_t>> dom_;
  std::vector<int> val_;
  const std::function<bool(const std::vector<int>&)>* cb_ = nullptr;
  bool stop_ = false, found_ = false;
};

// Initial domains: candidate colors filtered by the border tiles.
std::vector<std::vector<std::uint64_t>> border_domains(const Tables& t, int d, int n,
                                                       const std::function<bool(std::size_t, int)>& candidate) {
  std::size_t cells = ipow(n, d);
  std::vector<std::vector<std::uint64_t>> dom(cells, std::vector<std::uint64_t>(t.words, 0));
  for (std::size_t r = 0; r < cells; ++r) {
    Cell a = cell_of_rank(r, d, n);
    for (int g = 0; g < t.k; ++g) {
      if (!candidate(r, g)) continue;
      bool ok = true;
      for (int j = 0; j < d && ok; ++j) {
        if (a[j] == 1 && !t.allowed(j, t.k, g)) ok = false;
        if (a[j] == n && !t.allowed(j, g, t.k)) ok = false;
      }
      if (ok) dom[r][g / 64] |= std::uint64_t{1} << (g % 64);
    }
  }
  return dom;
}

}  // namespace

bool is_locally_tiled(const Picture& p, const Deltas& deltas) {
  int d = p.dim(), n = p.side();
  if (static_cast<int>(deltas.size()) != d) throw Error("need one tile set per dimension");
  const Alphabet& gamma = p.alphabet();
  Tables t(gamma, deltas);
  if (!t.corner) return false;
  for (std::size_t r = 0; r < p.size(); ++r) {
    Cell a = cell_of_rank(r, d, n);
    int v = p.code(r);
    for (int j = 0; j < d; ++j) {
      int prev = t.k;
      if (a[j] > 1) {
        Cell b = a;
        --b[j];
        prev = p.code_at(b);
      }
      if (!t.allowed(j, prev, v)) return false;
      if (a[j] == n && !t.allowed(j, v, t.k)) return false;
    }
  }
  return true;
}

static void check_input_alphabet(const TilingSystem& ts, const Picture& p) {
  for (std::size_t r = 0; r < p.size(); ++r) {
    const std::string& s = p.at_rank(r);
    if (std::find(ts.sigma.begin(), ts.sigma.end(), s) == ts.sigma.end())
      throw Error("alphabet mismatch: '" + s + "' is not an input symbol");
  }
}

std::optional<Picture> tiling_witness(const TilingSystem& ts, const Picture& p) {
  validate(ts);
  if (p.dim() != ts.dim()) throw Error("picture dimension differs from the tiling system");
  check_input_alphabet(ts, p);
  Tables t(ts.gamma, ts.deltas);
  auto dom = border_domains(t, p.dim(), p.side(), [&](std::size_t r, int g) { return ts.pi.at(ts.gamma[g]) == p.at_rank(r); });
  std::optional<Picture> out;
  Search s(t, p.dim(), p.side(), std::move(dom));
  auto alpha = std::make_shared<const Alphabet>(ts.gamma);
  s.run([&](const std::vector<int>& v) {
    out = Picture::from_codes(p.dim(), p.side(), alpha, v);
    return false;
  });
  return out;
}

bool recognizes(const TilingSystem& ts, const Picture& p) { return tiling_witness(ts, p).has_value(); }

std::vector<Picture> enumerate_local_members(const Deltas& deltas, const Alphabet& gamma, int n, std::size_t cap) {
  validate_alphabet(gamma);
  int d = static_cast<int>(deltas.size());
  if (d < 1 || n < 1) throw Error("bad dimension or side");
  double work = n * std::pow(static_cast<double>(gamma.size()), static_cast<double>(ipow(n, d)));
  if (work > static_cast<double>(cap)) throw CapExceeded("enumeration cap exceeded: n*|Gamma|^(n^d) = " + std::to_string(work));
  Tables t(gamma, deltas);
  auto dom = border_domains(t, d, n, [](std::size_t, int) { return true; });
  std::vector<Picture> out;
  auto alpha = std::make_shared<const Alphabet>(gamma);
  Search s(t, d, n, std::move(dom));
  s.run([&](const std::vector<int>& v) {
    out.push_back(Picture::from_codes(d, n, alpha, v));
    return true;
  });
  return out;
}

std::string tiling_to_json(const TilingSystem& ts) {
  nlohmann::ordered_json j;
  j["sigma"] = ts.sigma;
  j["gamma"] = ts.gamma;
  nlohmann::ordered_json pi = nlohmann::ordered_json::object();
  for (auto& g : ts.gamma)
    if (ts.pi.count(g)) pi[g] = ts.pi.at(g);
  j["pi"] = pi;
  j["deltas"] = nlohmann::ordered_json::array();
  for (auto& d : ts.deltas) {
    auto arr = nlohmann::ordered_json::array();
    for (auto& [u, v] : d.tiles) arr.push_back({u, v});
    j["deltas"].push_back(arr);
  }
  return j.dump(2) + "\n";
}

TilingSystem tiling_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("tiling JSON: ") + e.what());
  }
  TilingSystem ts;
  try {
    ts.sigma = j.at("sigma").get<Alphabet>();
    ts.gamma = j.at("gamma").get<Alphabet>();
    ts.pi = j.at("pi").get<std::map<std::string, std::string>>();
    int idx = 1;
    for (auto& d : j.at("deltas")) {
      TileSet t{idx++, {}};
      for (auto& pair : d) {
        if (!pair.is_array() || pair.size() != 2) throw Error("tiling JSON: tiles must be 2-element arrays");
        t.tiles.insert({pair[0].get<std::string>(), pair[1].get<std::string>()});
      }
      ts.deltas.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("tiling JSON: ") + e.what());
  }
  validate(ts);
  return ts;
}

}  // namespace picwb
