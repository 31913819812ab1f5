#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qt/graph.hpp"

namespace qt {

/// A letter is a generator (even code 2i) or its inverse (odd code 2i+1).
using Letter = std::uint8_t;

inline constexpr Letter inverse_letter(Letter l) { return l ^ 1u; }

/// Word over a symmetric generating set. Letters are stored as raw codes in
/// a std::string so words hash and compare cheaply. Comparison is shortlex.
class Word {
 public:
  Word() = default;
  explicit Word(std::string codes) : codes_(std::move(codes)) {}

  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  Letter operator[](std::size_t i) const { return static_cast<Letter>(codes_[i]); }
  Letter back() const { return static_cast<Letter>(codes_.back()); }

  void push_back(Letter l) { codes_.push_back(static_cast<char>(l)); }
  void pop_back() { codes_.pop_back(); }
  Word& operator+=(const Word& w) {
    codes_ += w.codes_;
    return *this;
  }
  friend Word operator+(Word a, const Word& b) { return a += b; }

  Word substr(std::size_t pos, std::size_t n = std::string::npos) const {
    return Word(codes_.substr(pos, n));
  }
  Word inverse() const;
  /// Cyclic rotation starting at position k.
  Word rotate(std::size_t k) const;

  const std::string& codes() const { return codes_; }

  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.codes_ < b.codes_;
  }
  friend bool operator>(const Word& a, const Word& b) { return b < a; }

 private:
  std::string codes_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return std::hash<std::string>{}(w.codes()); }
};

enum class PresentationClass { free, dehn };

/// Finite presentation with a word problem we can solve: free groups, or
/// metric small-cancellation C'(1/6) presentations via Dehn's algorithm.
class Presentation {
 public:
  /// `gens` are single lowercase symbols; relators are given in the text
  /// convention where an uppercase letter is the inverse generator.
  Presentation(std::vector<char> gens, const std::vector<std::string>& relators);

  static Presentation parse(std::string_view text);
  static Presentation load(const std::filesystem::path& path);
  static Presentation free_group(int rank);
  static Presentation surface_group(int genus);

  PresentationClass kind() const { return kind_; }
  std::size_t rank() const { return symbols_.size(); }
  std::size_t alphabet_size() const { return 2 * symbols_.size(); }
  const std::vector<Word>& relators() const { return relators_; }

  /// Largest piece length over the symmetrized relator set.
  std::size_t max_piece() const { return max_piece_; }

  Word parse_word(std::string_view text) const;
  std::string format(const Word& w) const;
  char symbol(Letter l) const;

  /// Canonical normal form (shortlex-least geodesic representative).
  Word reduce(const Word& w) const;
  Word multiply(const Word& a, const Word& b) const { return reduce(a + b); }
  /// Word length |a^{-1} b|.
  int distance(const Word& a, const Word& b) const {
    return static_cast<int>(reduce(a.inverse() + b).size());
  }
  /// True iff the word represents the identity (Dehn's algorithm / free reduction).
  bool is_identity(const Word& w) const { return reduce(w).empty(); }

  /// Shortlex-least cyclic rotation of the cyclically reduced form of g,
  /// taken over rotations of g and of its inverse.
  Word conjugacy_representative(const Word& g) const;
  /// True iff the cyclically reduced g is not a proper power.
  bool is_primitive(const Word& g) const;
  Word cyclically_reduce(const Word& g) const;

 private:
  Word free_reduce(const Word& w) const;
  Word dehn_reduce(Word w) const;
  bool dehn_step(Word& w) const;
  Word equal_length_minimum(const Word& w) const;

  std::vector<char> symbols_;
  std::vector<Word> relators_;
  std::vector<Word> symmetrized_;  // cyclic conjugates of relators and inverses
  PresentationClass kind_ = PresentationClass::free;
  std::size_t max_piece_ = 0;
};

/// Cayley graph truncated to the ball of the given radius.
class CayleyBall {
 public:
  static inline constexpr std::size_t kDefaultCap = 2'000'000;

  CayleyBall(const Presentation& p, int radius, std::size_t cap = kDefaultCap);

  const Presentation& presentation() const { return p_; }
  int radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }
  const MetricGraph& graph() const { return graph_; }

  const Word& word(VertexId v) const { return words_[v]; }
  int length(VertexId v) const { return static_cast<int>(words_[v].size()); }
  std::optional<VertexId> find(const Word& normal_form) const;
  /// Vertex of reduce(w), if inside the ball.
  std::optional<VertexId> locate(const Word& w) const { return find(p_.reduce(w)); }

  /// Number of vertices at each distance from the identity.
  std::vector<std::size_t> sphere_sizes() const;
  /// First vertex id at the given length (vertices are sorted shortlex).
  VertexId sphere_begin(int length) const { return sphere_offsets_[length]; }

  /// Vertex of word(v)·l, or kUnreachable when it leaves the ball.
  VertexId step(VertexId v, Letter l) const { return step_[v * alphabet_ + l]; }
  /// Follows the letters of w from v; kUnreachable once the path leaves the ball.
  VertexId walk(VertexId v, const Word& w) const;

 private:
  Presentation p_;
  int radius_;
  std::vector<Word> words_;
  std::vector<VertexId> sphere_offsets_;
  std::unordered_map<Word, VertexId, WordHash> index_;
  std::size_t alphabet_ = 0;
  std::vector<VertexId> step_;
  MetricGraph graph_;
};

}  // namespace qt
