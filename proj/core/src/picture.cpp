#include "picwb/picture.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace picwb {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::size_t cell_rank(const Cell& a, int n) {
  std::size_t r = 0;
  for (int v : a) r = r * n + (v - 1);
  return r;
}

Cell cell_of_rank(std::size_t r, int d, int n) {
  Cell a(d);
  for (int i = d - 1; i >= 0; --i) {
    a[i] = static_cast<int>(r % n) + 1;
    r /= n;
  }
  return a;
}

// suc_i o ... o suc_d where i is the smallest index whose tail is all maximal
std::optional<Cell> lex_successor(const Cell& a, int n) {
  int d = static_cast<int>(a.size());
  int i = d - 1;
  while (i >= 0 && a[i] == n) --i;
  if (i < 0) return std::nullopt;
  Cell b = a;
  for (int j = i; j < d; ++j) b[j] = b[j] % n + 1;
  return b;
}

Picture Picture::from_codes(int d, int n, std::shared_ptr<const Alphabet> alphabet, std::vector<int> codes) {
  if (d < 1 || n < 1) throw Error("picture dimension and side must be positive");
  if (codes.size() != ipow(n, d))
    throw Error("picture needs " + std::to_string(ipow(n, d)) + " cells, got " + std::to_string(codes.size()));
  for (int c : codes)
    if (c < 0 || c >= static_cast<int>(alphabet->size())) throw Error("cell code outside alphabet");
  Picture p;
  p.d_ = d;
  p.n_ = n;
  p.alphabet_ = std::move(alphabet);
  p.codes_ = std::move(codes);
  return p;
}

int Picture::symbol_code(const std::string& s) const {
  auto it = std::find(alphabet_->begin(), alphabet_->end(), s);
  return it == alphabet_->end() ? -1 : static_cast<int>(it - alphabet_->begin());
}

bool Picture::operator==(const Picture& o) const {
  if (d_ != o.d_ || n_ != o.n_ || codes_.size() != o.codes_.size()) return false;
  for (std::size_t r = 0; r < codes_.size(); ++r)
    if (at_rank(r) != o.at_rank(r)) return false;
  return true;
}

void validate_alphabet(const Alphabet& alphabet) {
  std::set<std::string> seen;
  for (auto& s : alphabet) {
    if (s == kBorder || s == kPad) throw Error("reserved symbol '" + s + "' in alphabet");
    if (s.empty()) throw Error("empty symbol in alphabet");
    if (!seen.insert(s).second) throw Error("duplicate symbol '" + s + "' in alphabet");
  }
}

Picture make_picture(int d, int n, const Alphabet& alphabet, const std::vector<std::string>& cells) {
  validate_alphabet(alphabet);
  if (d < 1 || n < 1) throw Error("picture dimension and side must be positive");
  if (cells.size() != ipow(n, d))
    throw Error("picture needs " + std::to_string(ipow(n, d)) + " cells, got " + std::to_string(cells.size()));
  std::vector<int> codes;
  codes.reserve(cells.size());
  for (auto& c : cells) {
    auto it = std::find(alphabet.begin(), alphabet.end(), c);
    if (it == alphabet.end()) throw Error("cell symbol '" + c + "' not in alphabet");
    codes.push_back(static_cast<int>(it - alphabet.begin()));
  }
  return Picture::from_codes(d, n, std::make_shared<Alphabet>(alphabet), std::move(codes));
}

std::string bordered_value(const Picture& p, const Cell& a) {
  if (static_cast<int>(a.size()) != p.dim()) throw Error("cell has wrong dimension");
  bool inside = true;
  for (int v : a) {
    if (v < 0 || v > p.side() + 1) throw Error("coordinate outside the bordered picture");
    if (v == 0 || v == p.side() + 1) inside = false;
  }
  return inside ? p.at(a) : kBorder;
}

Relation& FiniteStructure::add_relation(const std::string& name, int arity) {
  Relation& r = relations[name];
  r.arity = arity;
  r.bits.assign(ipow(m, arity), 0);
  return r;
}

std::size_t FiniteStructure::tuple_index(const std::vector<int>& t) const {
  std::size_t r = 0;
  for (int v : t) {
    if (v < 1 || v > m) throw Error("tuple component outside the domain");
    r = r * m + (v - 1);
  }
  return r;
}

void FiniteStructure::insert(const std::string& name, const std::vector<int>& t) {
  auto it = relations.find(name);
  if (it == relations.end()) throw Error("unknown relation " + name);
  if (static_cast<int>(t.size()) != it->second.arity) throw Error("arity mismatch for " + name);
  it->second.bits[tuple_index(t)] = 1;
}

bool FiniteStructure::holds(const std::string& name, const std::vector<int>& t) const {
  auto it = relations.find(name);
  if (it == relations.end()) throw Error("uninterpreted symbol " + name);
  if (static_cast<int>(t.size()) != it->second.arity) throw Error("arity mismatch for " + name);
  return it->second.bits[tuple_index(t)];
}

std::vector<std::vector<int>> FiniteStructure::tuples(const std::string& name) const {
  auto it = relations.find(name);
  if (it == relations.end()) throw Error("uninterpreted symbol " + name);
  std::vector<std::vector<int>> out;
  const Relation& r = it->second;
  for (std::size_t i = 0; i < r.bits.size(); ++i)
    if (r.bits[i]) out.push_back(cell_of_rank(i, r.arity, m));
  return out;
}

void FiniteStructure::validate() const {
  if (m < 1) throw Error("empty domain");
  for (auto& [name, r] : relations)
    if (r.bits.size() != ipow(m, r.arity)) throw Error("relation " + name + " has the wrong size");
  for (auto& [name, f] : functions) {
    if (static_cast<int>(f.size()) != m) throw Error("function " + name + " is not total");
    for (int v : f)
      if (v < 1 || v > m) throw Error("function " + name + " leaves the domain");
  }
}

std::string to_string(Encoding e) { return e == Encoding::Pixel ? "pixel" : "coordinate"; }

Encoding parse_encoding(const std::string& s) {
  if (s == "pixel") return Encoding::Pixel;
  if (s == "coordinate" || s == "coord") return Encoding::Coordinate;
  throw Error("unknown encoding '" + s + "'");
}

FiniteStructure pixel_structure(const Picture& p) {
  const int d = p.dim(), n = p.side();
  FiniteStructure s;
  s.m = static_cast<int>(p.size());
  for (auto& a : p.alphabet()) s.add_relation("Q_" + a, 1);
  for (int i = 1; i <= d; ++i) {
    s.add_relation("min_" + std::to_string(i), 1);
    s.add_relation("max_" + std::to_string(i), 1);
    s.functions["suc_" + std::to_string(i)].assign(s.m, 0);
  }
  for (std::size_t r = 0; r < p.size(); ++r) {
    Cell a = cell_of_rank(r, d, n);
    int e = static_cast<int>(r) + 1;
    s.relations["Q_" + p.at_rank(r)].bits[r] = 1;
    for (int i = 1; i <= d; ++i) {
      if (a[i - 1] == 1) s.relations["min_" + std::to_string(i)].bits[r] = 1;
      if (a[i - 1] == n) s.relations["max_" + std::to_string(i)].bits[r] = 1;
      Cell b = a;
      b[i - 1] = a[i - 1] % n + 1;
      s.functions["suc_" + std::to_string(i)][e - 1] = static_cast<int>(cell_rank(b, n)) + 1;
    }
  }
  return s;
}

FiniteStructure coordinate_structure(const Picture& p) {
  const int d = p.dim(), n = p.side();
  FiniteStructure s;
  s.m = n;
  for (auto& a : p.alphabet()) s.add_relation("Q_" + a, d);
  for (std::size_t r = 0; r < p.size(); ++r) s.relations["Q_" + p.at_rank(r)].bits[r] = 1;
  s.add_relation("<", 2);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) s.insert("<", {i, j});
  s.add_relation("min", 1).bits[0] = 1;
  s.add_relation("max", 1).bits[n - 1] = 1;
  auto& suc = s.functions["suc"];
  for (int i = 1; i <= n; ++i) suc.push_back(i % n + 1);
  return s;
}

FiniteStructure encode(const Picture& p, Encoding e) {
  return e == Encoding::Pixel ? pixel_structure(p) : coordinate_structure(p);
}

Picture square_picture(const RectPicture& p) {
  validate_alphabet(p.alphabet);
  int d = static_cast<int>(p.shape.size());
  if (d < 1) throw Error("rectangular picture needs a shape");
  std::size_t total = 1;
  for (int s : p.shape) {
    if (s < 1) throw Error("sides must be positive");
    total *= s;
  }
  if (p.cells.size() != total) throw Error("cell count does not match the shape");
  int n = *std::max_element(p.shape.begin(), p.shape.end());
  bool square = std::all_of(p.shape.begin(), p.shape.end(), [&](int s) { return s == n; });
  auto alpha = std::make_shared<Alphabet>(p.alphabet);
  if (!square) alpha->push_back(kPad);
  int pad = static_cast<int>(alpha->size()) - 1;
  std::vector<int> codes(ipow(n, d), pad);
  std::vector<int> a(d, 0);
  for (std::size_t r = 0; r < total; ++r) {
    auto it = std::find(p.alphabet.begin(), p.alphabet.end(), p.cells[r]);
    if (it == p.alphabet.end()) throw Error("cell symbol '" + p.cells[r] + "' not in alphabet");
    std::size_t q = 0;
    for (int i = 0; i < d; ++i) q = q * n + a[i];
    codes[q] = static_cast<int>(it - p.alphabet.begin());
    for (int i = d - 1; i >= 0; --i) {
      if (++a[i] < p.shape[i]) break;
      a[i] = 0;
    }
  }
  return Picture::from_codes(d, n, alpha, std::move(codes));
}

bool is_c_balanced(const RectPicture& p, int c) {
  int mx = *std::max_element(p.shape.begin(), p.shape.end());
  return std::all_of(p.shape.begin(), p.shape.end(), [&](int s) { return mx <= c * s; });
}

static std::vector<std::string> picture_lines(const Picture& p) {
  std::vector<std::string> lines;
  lines.push_back(std::to_string(p.dim()) + " " + std::to_string(p.side()));
  std::string al;
  for (auto& s : p.alphabet()) al += (al.empty() ? "" : " ") + s;
  lines.push_back(al);
  for (std::size_t r = 0; r < p.size(); r += p.side()) {
    std::string row;
    for (int j = 0; j < p.side(); ++j) row += (j ? " " : "") + p.at_rank(r + j);
    lines.push_back(row);
  }
  return lines;
}

std::string picture_to_text(const Picture& p) {
  std::string out;
  for (auto& l : picture_lines(p)) out += l + "\n";
  return out;
}

std::string picture_inline(const Picture& p) {
  std::string out;
  for (auto& l : picture_lines(p)) out += (out.empty() ? "" : " / ") + l;
  return out;
}

static std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Picture parse_picture(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(l);
    }
    while (!lines.empty() && split_ws(lines.back()).empty()) lines.pop_back();
  }
  auto fail = [](std::size_t line, const std::string& msg) -> Error {
    return Error("picture line " + std::to_string(line) + ": " + msg);
  };
  if (lines.size() < 2) throw fail(lines.size() + 1, "expected header and alphabet lines");
  auto head = split_ws(lines[0]);
  if (head.size() != 2) throw fail(1, "expected 'd n'");
  int d, n;
  try {
    d = std::stoi(head[0]);
    n = std::stoi(head[1]);
  } catch (...) {
    throw fail(1, "expected two integers");
  }
  if (d < 1 || n < 1) throw fail(1, "d and n must be positive");
  Alphabet alpha = split_ws(lines[1]);
  std::size_t rows = ipow(n, d - 1);
  if (lines.size() != rows + 2)
    throw fail(lines.size() + 1, "expected " + std::to_string(rows) + " rows, got " + std::to_string(lines.size() - 2));
  std::vector<std::string> cells;
  for (std::size_t i = 0; i < rows; ++i) {
    auto row = split_ws(lines[i + 2]);
    if (static_cast<int>(row.size()) != n) throw fail(i + 3, "expected " + std::to_string(n) + " symbols");
    cells.insert(cells.end(), row.begin(), row.end());
  }
  try {
    return make_picture(d, n, alpha, cells);
  } catch (const Error& e) {
    throw fail(2, e.what());
  }
}

void for_each_picture(int d, int n, const Alphabet& alphabet, const std::function<bool(const Picture&)>& fn) {
  auto alpha = std::make_shared<const Alphabet>(alphabet);
  std::size_t cells = ipow(n, d);
  int k = static_cast<int>(alphabet.size());
  if (k == 0) return;
  std::vector<int> codes(cells, 0);
  while (true) {
    if (!fn(Picture::from_codes(d, n, alpha, codes))) return;
    std::size_t i = cells;
    while (i > 0) {
      if (++codes[i - 1] < k) break;
      codes[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

}  // namespace picwb
