#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qt/group.hpp"

namespace qt {

struct AxesConfig {
  int L = 3;       // subword length to cover
  int R = 0;       // witness radius
  int L_cand = 6;  // candidate pool length bound
  double lambda = 1.0;
  double c = 0.0;
};

/// Contiguous run of an axis translate inside a ball. Parameter t runs over
/// [t_begin, t_begin + verts.size()); vertex i sits at parameter t_begin + i.
/// Both ends lie on the outer sphere: the run is cut only by the ball.
struct AxisSegment {
  std::vector<VertexId> verts;
  long t_begin = 0;
};

/// Axis of an indivisible element g: the union of the translates g^n·[1,g].
/// The point at parameter t = n·|base| + j is g^n·base[0..j).
class Axis {
 public:
  Axis(Word g, Word base) : g_(std::move(g)), base_(std::move(base)) {}

  const Word& g() const { return g_; }
  const Word& base() const { return base_; }
  std::size_t period() const { return base_.size(); }

  /// The maximal run of h·γ inside the ball that contains the anchor h.
  /// Throws when h itself lies outside the ball.
  AxisSegment materialize(const CayleyBall& ball, const Word& h = {}) const;
  AxisSegment materialize_at(const CayleyBall& ball, VertexId anchor) const;

  /// The label sequence read along the axis, one period forward and one back.
  std::vector<Word> subwords(std::size_t max_len) const;

  /// g^n for n in [-reach, reach], reduced.
  std::vector<Word> powers(const Presentation& p, int reach) const;

 private:
  Word g_;
  Word base_;
};

enum class AxisTag { candidates, preferred };

struct AxisCollection {
  std::vector<Axis> axes;
  AxisTag tag = AxisTag::candidates;
};

/// Chooses a canonical orientation so that build_axis(g) and build_axis(g^-1)
/// produce the same axis.
Axis build_axis(const Presentation& p, const Word& g, const CayleyBall& ball);
Axis build_axis(const Presentation& p, const Word& g);

/// Axes of all primitive conjugacy classes with a representative of length
/// at most max_len, listed in shortlex order of their representative.
AxisCollection candidate_axes(const Presentation& p, int max_len);

struct Coverage {
  std::vector<Word> words;      // every length <= L subword seen on a candidate
  std::vector<Word> uncovered;  // words no selected axis contains
};

AxisCollection select_preferred_axes(const Presentation& p, const AxisCollection& candidates,
                                     const AxesConfig& cfg, const CayleyBall& ball);
Coverage coverage(const AxisCollection& candidates, const AxisCollection& selected, int L);

struct ScanEntry {
  Word key;
  int diam = 0;
  std::size_t translates = 0;
};

struct ScanResult {
  std::vector<ScanEntry> entries;  // sorted by key
  std::size_t truncated = 0;       // translates skipped because of the ball boundary
  std::size_t scanned = 0;
};

/// Translates h·γ (h in the ball, h outside <g>) whose projection onto γ has
/// diameter above theta, grouped by the double coset <g>h<g>.
ScanResult double_coset_scan(const Axis& axis, const CayleyBall& ball, int theta);

/// Shortlex-least element of the left coset h<g>; identifies the translate h·γ.
Word coset_key(const Presentation& p, const Axis& axis, const Word& h);

/// Shortlex-least element of <g>h<g> inside the ball.
Word double_coset_key(const Axis& axis, const CayleyBall& ball, const Word& h);

struct Witness {
  std::size_t axis_index = 0;
  Word shift;  // the witness is shift·axes[axis_index]
  int R = 0;
};

/// Translate of a candidate axis passing closest to both x and y (minimising
/// the larger of the two distances, measured in the ball graph).
Witness witness_axis(const Word& x, const Word& y, const AxisCollection& candidates,
                     const CayleyBall& ball);

/// `g=<word>; base=<word>` lines.
void write_axes(std::ostream& out, const Presentation& p, const AxisCollection& axes);
void write_scan_csv(std::ostream& out, const Presentation& p, const ScanResult& scan);

}  // namespace qt
