#include "qt/group.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace qt {

Word Word::inverse() const {
  std::string out(codes_.rbegin(), codes_.rend());
  for (auto& c : out) c = static_cast<char>(inverse_letter(static_cast<Letter>(c)));
  return Word(std::move(out));
}

Word Word::rotate(std::size_t k) const {
  if (codes_.empty()) return *this;
  k %= codes_.size();
  return Word(codes_.substr(k) + codes_.substr(0, k));
}

namespace {

// Closure sizes beyond this mean the presentation is not behaving like a
// small-cancellation group at the lengths we use.
constexpr std::size_t kClosureLimit = 200'000;

std::size_t common_prefix(const Word& w, std::size_t pos, const Word& r) {
  std::size_t n = 0;
  while (pos + n < w.size() && n < r.size() && w[pos + n] == r[n]) ++n;
  return n;
}

}  // namespace

Presentation::Presentation(std::vector<char> gens, const std::vector<std::string>& relators)
    : symbols_(std::move(gens)) {
  std::set<char> seen;
  for (char c : symbols_) {
    if (!std::islower(static_cast<unsigned char>(c))) {
      throw Error(std::string("generator symbol must be a lowercase letter: ") + c);
    }
    if (!seen.insert(c).second) throw Error(std::string("duplicate generator ") + c);
  }
  for (const auto& text : relators) {
    Word r = free_reduce(parse_word(text));
    if (r.empty()) continue;
    // The freely and cyclically reduced form is stored.
    while (r.size() > 1 && r[0] == inverse_letter(r.back())) r = r.substr(1, r.size() - 2);
    relators_.push_back(r);
  }
  if (relators_.empty()) {
    kind_ = PresentationClass::free;
    return;
  }
  kind_ = PresentationClass::dehn;
  std::set<Word> sym;
  for (const auto& r : relators_) {
    for (const Word& base : {r, r.inverse()}) {
      for (std::size_t k = 0; k < base.size(); ++k) sym.insert(base.rotate(k));
    }
  }
  symmetrized_.assign(sym.begin(), sym.end());
  for (std::size_t i = 0; i < symmetrized_.size(); ++i) {
    for (std::size_t j = 0; j < symmetrized_.size(); ++j) {
      if (i == j) continue;
      const std::size_t piece = common_prefix(symmetrized_[i], 0, symmetrized_[j]);
      max_piece_ = std::max(max_piece_, piece);
      if (6 * piece >= symmetrized_[i].size()) {
        throw Error("presentation fails C'(1/6): piece of length " + std::to_string(piece) +
                    " in relator " + format(symmetrized_[i]));
      }
    }
  }
}

Presentation Presentation::parse(std::string_view text) {
  std::vector<char> gens;
  std::vector<std::string> rels;
  std::string declared;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string tok;
    if (key == "gens:") {
      while (ls >> tok) {
        if (tok.size() != 1) throw Error("generator must be a single symbol: " + tok);
        gens.push_back(tok[0]);
      }
    } else if (key == "rel:") {
      std::string word;
      while (ls >> tok) word += tok;
      rels.push_back(word);
    } else if (key == "class:") {
      ls >> declared;
    } else {
      throw Error("unrecognized presentation line: " + line);
    }
  }
  if (gens.empty()) throw Error("presentation has no 'gens:' line");
  Presentation p(std::move(gens), rels);
  if (!declared.empty()) {
    const bool ok = (declared == "free" && p.kind() == PresentationClass::free) ||
                    (declared == "dehn" && p.kind() == PresentationClass::dehn);
    if (!ok) throw Error("declared class '" + declared + "' does not match relators");
  }
  return p;
}

Presentation Presentation::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open presentation file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Presentation Presentation::free_group(int rank) {
  std::vector<char> gens;
  for (int i = 0; i < rank; ++i) gens.push_back(static_cast<char>('a' + i));
  return Presentation(std::move(gens), {});
}

Presentation Presentation::surface_group(int genus) {
  std::vector<char> gens;
  std::string rel;
  for (int i = 0; i < genus; ++i) {
    const char x = static_cast<char>('a' + 2 * i);
    const char y = static_cast<char>('a' + 2 * i + 1);
    gens.push_back(x);
    gens.push_back(y);
    rel += {x, y, static_cast<char>(std::toupper(x)), static_cast<char>(std::toupper(y))};
  }
  return Presentation(std::move(gens), {rel});
}

Word Presentation::parse_word(std::string_view text) const {
  Word w;
  for (char c : text) {
    if (c == ' ' || c == '1') continue;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(symbols_.begin(), symbols_.end(), lower);
    if (it == symbols_.end()) throw Error(std::string("letter outside alphabet: ") + c);
    const auto gen = static_cast<Letter>(2 * (it - symbols_.begin()));
    w.push_back(std::isupper(static_cast<unsigned char>(c)) ? gen + 1 : gen);
  }
  return w;
}

char Presentation::symbol(Letter l) const {
  const char c = symbols_.at(l / 2);
  return (l & 1u) ? static_cast<char>(std::toupper(c)) : c;
}

std::string Presentation::format(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  s.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) s.push_back(symbol(w[i]));
  return s;
}

Word Presentation::free_reduce(const Word& w) const {
  Word out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= alphabet_size()) throw Error("letter outside alphabet");
    if (!out.empty() && out.back() == inverse_letter(w[i])) {
      out.pop_back();
    } else {
      out.push_back(w[i]);
    }
  }
  return out;
}

// Replaces the longest subword that is more than half of a relator by the
// inverse of the complementary piece. Returns false when none exists.
bool Presentation::dehn_step(Word& w) const {
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (const auto& r : symmetrized_) {
      const std::size_t n = common_prefix(w, pos, r);
      if (2 * n > r.size()) {
        Word replacement = r.substr(n).inverse();
        w = free_reduce(w.substr(0, pos) + replacement + w.substr(pos + n));
        return true;
      }
    }
  }
  return false;
}

Word Presentation::dehn_reduce(Word w) const {
  w = free_reduce(w);
  while (dehn_step(w)) {
  }
  return w;
}

// Explores the words reachable by swapping one half of a relator for the
// other half. If any of them admits a length-reducing step the search restarts
// from the shorter word; otherwise the shortlex minimum is returned.
Word Presentation::equal_length_minimum(const Word& start) const {
  Word current = start;
  for (;;) {
    std::unordered_set<Word, WordHash> seen{current};
    std::vector<Word> queue{current};
    Word best = current;
    bool restarted = false;
    for (std::size_t head = 0; head < queue.size() && !restarted; ++head) {
      const Word w = queue[head];
      for (std::size_t pos = 0; pos < w.size() && !restarted; ++pos) {
        for (const auto& r : symmetrized_) {
          if (r.size() % 2 != 0) continue;
          const std::size_t half = r.size() / 2;
          if (common_prefix(w, pos, r) < half) continue;
          Word swapped = w.substr(0, pos) + r.substr(half).inverse() + w.substr(pos + half);
          Word reduced = dehn_reduce(swapped);
          if (reduced.size() < w.size()) {
            current = std::move(reduced);
            restarted = true;
            break;
          }
          if (seen.insert(swapped).second) {
            if (seen.size() > kClosureLimit) throw Error("word closure exceeded limit");
            if (swapped < best) best = swapped;
            queue.push_back(std::move(swapped));
          }
        }
      }
    }
    if (!restarted) return best;
  }
}

Word Presentation::reduce(const Word& w) const {
  if (kind_ == PresentationClass::free) return free_reduce(w);
  return equal_length_minimum(dehn_reduce(w));
}

Word Presentation::cyclically_reduce(const Word& g) const {
  Word w = reduce(g);
  bool changed = true;
  while (changed && !w.empty()) {
    changed = false;
    while (w.size() > 1 && w[0] == inverse_letter(w.back())) {
      w = reduce(w.substr(1, w.size() - 2));
      changed = true;
    }
    if (kind_ == PresentationClass::dehn) {
      for (std::size_t k = 1; k < w.size(); ++k) {
        Word r = reduce(w.rotate(k));
        if (r.size() < w.size()) {
          w = std::move(r);
          changed = true;
          break;
        }
      }
    }
  }
  return w;
}

namespace {

// All cyclic words reachable from w by rotation followed by normal form,
// restricted to words of w's length.
std::vector<Word> cyclic_class(const Presentation& p, const Word& w) {
  std::unordered_set<Word, WordHash> seen{w};
  std::vector<Word> queue{w};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Word cur = queue[head];
    for (std::size_t k = 0; k < cur.size(); ++k) {
      for (Word next : {cur.rotate(k), p.reduce(cur.rotate(k))}) {
        if (next.size() != w.size()) continue;
        if (seen.insert(next).second) {
          if (seen.size() > kClosureLimit) throw Error("cyclic closure exceeded limit");
          queue.push_back(std::move(next));
        }
      }
    }
  }
  return queue;
}

bool is_proper_power_word(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    if (w.rotate(d) == w) return true;
  }
  return false;
}

}  // namespace

Word Presentation::conjugacy_representative(const Word& g) const {
  const Word w = cyclically_reduce(g);
  if (w.empty()) throw Error("no axis for identity");
  if (kind_ == PresentationClass::free) {
    Word best = w;
    const Word inv = w.inverse();
    for (std::size_t k = 0; k < w.size(); ++k) {
      best = std::min({best, w.rotate(k), inv.rotate(k)});
    }
    return best;
  }
  Word best = w;
  for (const Word& base : {w, w.inverse()}) {
    for (const auto& c : cyclic_class(*this, base)) best = std::min(best, c);
  }
  return best;
}

bool Presentation::is_primitive(const Word& g) const {
  const Word w = cyclically_reduce(g);
  if (w.empty()) throw Error("identity has no root structure");
  if (kind_ == PresentationClass::free) return !is_proper_power_word(w);
  for (const auto& c : cyclic_class(*this, w)) {
    if (is_proper_power_word(c)) return false;
  }
  return true;
}

CayleyBall::CayleyBall(const Presentation& p, int radius, std::size_t cap)
    : p_(p), radius_(radius) {
  if (radius < 0) throw Error("ball radius must be non-negative");
  if (p.kind() == PresentationClass::free && p.rank() > 0) {
    // Exact count: 1 + 2n * sum_{k<r} (2n-1)^k.
    const double q = 2.0 * p.rank() - 1.0;
    double projected = 1.0, sphere = 2.0 * p.rank();
    for (int k = 1; k <= radius; ++k, sphere *= q) projected += sphere;
    if (projected > static_cast<double>(cap)) throw Error("ball too large");
  }
  const auto letters = static_cast<Letter>(p.alphabet_size());
  words_.push_back(Word{});
  index_.emplace(Word{}, 0);
  sphere_offsets_ = {0, 1};
  for (int k = 0; k < radius; ++k) {
    std::vector<Word> next;
    for (VertexId v = sphere_offsets_[k]; v < sphere_offsets_[k + 1]; ++v) {
      for (Letter l = 0; l < letters; ++l) {
        Word w = p_.reduce(words_[v] + Word(std::string(1, static_cast<char>(l))));
        if (static_cast<int>(w.size()) == k + 1) {
          next.push_back(std::move(w));
        } else if (static_cast<int>(w.size()) <= k && !index_.count(w)) {
          throw Error("normal form is not geodesic: " + p_.format(w));
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (words_.size() + next.size() > cap) throw Error("ball too large");
    for (auto& w : next) {
      index_.emplace(w, static_cast<VertexId>(words_.size()));
      words_.push_back(std::move(w));
    }
    sphere_offsets_.push_back(static_cast<VertexId>(words_.size()));
  }

  MetricGraph::Builder b;
  alphabet_ = letters;
  step_.assign(words_.size() * alphabet_, kUnreachable);
  for (const auto& w : words_) b.add_vertex(p_.format(w));
  for (VertexId v = 0; v < static_cast<VertexId>(words_.size()); ++v) {
    for (Letter l = 0; l < letters; l += 2) {
      Word w = p_.reduce(words_[v] + Word(std::string(1, static_cast<char>(l))));
      if (auto it = index_.find(w); it != index_.end()) {
        b.add_edge(v, it->second);
        step_[v * alphabet_ + l] = it->second;
        step_[it->second * alphabet_ + inverse_letter(l)] = v;
      }
    }
  }
  graph_ = std::move(b).build();
}

std::optional<VertexId> CayleyBall::find(const Word& normal_form) const {
  auto it = index_.find(normal_form);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId CayleyBall::walk(VertexId v, const Word& w) const {
  for (std::size_t i = 0; i < w.size() && v != kUnreachable; ++i) v = step(v, w[i]);
  return v;
}

std::vector<std::size_t> CayleyBall::sphere_sizes() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k + 1 < sphere_offsets_.size(); ++k) {
    out.push_back(static_cast<std::size_t>(sphere_offsets_[k + 1] - sphere_offsets_[k]));
  }
  return out;
}

}  // namespace qt
