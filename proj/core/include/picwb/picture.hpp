#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace picwb {

inline const std::string kBorder = "#";
inline const std::string kPad = "□";

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapExceeded : Error {
  using Error::Error;
};

using Cell = std::vector<int>;  // 1-based coordinates
using Alphabet = std::vector<std::string>;

std::size_t ipow(std::size_t b, int e);
std::size_t cell_rank(const Cell& a, int n);
Cell cell_of_rank(std::size_t r, int d, int n);
std::optional<Cell> lex_successor(const Cell& a, int n);

class Picture {
 public:
  Picture() = default;
  // cells given as alphabet codes in lexicographic cell order
  static Picture from_codes(int d, int n, std::shared_ptr<const Alphabet> alphabet, std::vector<int> codes);

  int dim() const { return d_; }
  int side() const { return n_; }
  std::size_t size() const { return codes_.size(); }
  const Alphabet& alphabet() const { return *alphabet_; }
  std::shared_ptr<const Alphabet> alphabet_ptr() const { return alphabet_; }
  const std::vector<int>& codes() const { return codes_; }
  int code(std::size_t rank) const { return codes_[rank]; }
  int code_at(const Cell& a) const { return codes_[cell_rank(a, n_)]; }
  const std::string& at(const Cell& a) const { return (*alphabet_)[code_at(a)]; }
  const std::string& at_rank(std::size_t r) const { return (*alphabet_)[codes_[r]]; }
  int symbol_code(const std::string& s) const;

  bool operator==(const Picture& o) const;

 private:
  int d_ = 1, n_ = 1;
  std::shared_ptr<const Alphabet> alphabet_ = std::make_shared<Alphabet>();
  std::vector<int> codes_;
};

void validate_alphabet(const Alphabet& alphabet);
Picture make_picture(int d, int n, const Alphabet& alphabet, const std::vector<std::string>& cells);
std::string bordered_value(const Picture& p, const Cell& a);

struct Relation {
  int arity = 0;
  std::vector<std::uint8_t> bits;  // indexed by lexicographic rank of the tuple
};

struct FiniteStructure {
  int m = 1;
  std::map<std::string, Relation> relations;
  std::map<std::string, std::vector<int>> functions;  // f[e-1] is the image of e

  Relation& add_relation(const std::string& name, int arity);
  void insert(const std::string& name, const std::vector<int>& tuple);
  bool holds(const std::string& name, const std::vector<int>& tuple) const;
  std::vector<std::vector<int>> tuples(const std::string& name) const;
  std::size_t tuple_index(const std::vector<int>& tuple) const;
  void validate() const;
};

enum class Encoding { Pixel, Coordinate };
std::string to_string(Encoding e);
Encoding parse_encoding(const std::string& s);

FiniteStructure pixel_structure(const Picture& p);
FiniteStructure coordinate_structure(const Picture& p);
FiniteStructure encode(const Picture& p, Encoding e);

struct RectPicture {
  std::vector<int> shape;
  Alphabet alphabet;
  std::vector<std::string> cells;  // lexicographic order
};
Picture square_picture(const RectPicture& p);
bool is_c_balanced(const RectPicture& p, int c);

std::string picture_to_text(const Picture& p);
std::string picture_inline(const Picture& p);
Picture parse_picture(const std::string& text);

// Visits every picture of side n over the alphabet, lexicographically by cell list.
void for_each_picture(int d, int n, const Alphabet& alphabet, const std::function<bool(const Picture&)>& fn);

}  // namespace picwb
