#pragma once

// The {4,6}×E cube honeycomb: square tiles of H² meeting six at a vertex,
// stacked along E. Cells are addressed by words in six generators, the
// camera is kept inside the central cell by teleporting, and cells are
// coloured by lifting a colouring of a genus-two surface.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "h2xe/isometry.hpp"

namespace h2xe {

/// A..D cross the square's edges along θ = 0, π/2, π, 3π/2; U/V step one
/// layer up/down the E direction.
enum class Gen : std::uint8_t { A, B, C, D, U, V };

inline constexpr std::array<Gen, 6> kAllGens{Gen::A, Gen::B, Gen::C, Gen::D, Gen::U, Gen::V};
inline constexpr std::array<Gen, 4> kHorizontalGens{Gen::A, Gen::B, Gen::C, Gen::D};

constexpr char to_char(Gen g) { return "ABCDUV"[static_cast<int>(g)]; }

inline Gen gen_from_char(char c) {
  switch (c) {
    case 'A': return Gen::A;
    case 'B': return Gen::B;
    case 'C': return Gen::C;
    case 'D': return Gen::D;
    case 'U': return Gen::U;
    case 'V': return Gen::V;
    default: throw std::invalid_argument(std::string("unknown generator letter '") + c + "'");
  }
}

constexpr Gen inverse(Gen g) {
  switch (g) {
    case Gen::A: return Gen::C;
    case Gen::B: return Gen::D;
    case Gen::C: return Gen::A;
    case Gen::D: return Gen::B;
    case Gen::U: return Gen::V;
    case Gen::V: return Gen::U;
  }
  return g;
}

constexpr bool is_horizontal(Gen g) { return g != Gen::U && g != Gen::V; }

/// Word in the generators, kept freely reduced over the pairs (A,C), (B,D), (U,V).
class CellWord {
 public:
  CellWord() = default;
  explicit CellWord(std::string_view letters) {
    for (char c : letters) push_back(gen_from_char(c));
  }

  void push_back(Gen g) {
    if (!letters_.empty() && letters_.back() == to_char(h2xe::inverse(g))) {
      letters_.pop_back();
    } else {
      letters_.push_back(to_char(g));
    }
  }

  CellWord inverse() const {
    CellWord out;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(h2xe::inverse(gen_from_char(*it)));
    return out;
  }

  /// #U − #V.
  int layer() const {
    int n = 0;
    for (char c : letters_) n += c == 'U' ? 1 : c == 'V' ? -1 : 0;
    return n;
  }

  const std::string& str() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::optional<Gen> last() const {
    if (letters_.empty()) return std::nullopt;
    return gen_from_char(letters_.back());
  }

  friend CellWord operator*(CellWord lhs, const CellWord& rhs) {
    for (char c : rhs.letters_) lhs.push_back(gen_from_char(c));
    return lhs;
  }
  friend bool operator==(const CellWord&, const CellWord&) = default;

 private:
  std::string letters_;
};

/// Metric constants of the regular {4,6} square.
namespace honeycomb46 {
/// Centre to edge midpoint; cosh = cos(π/6)/sin(π/4).
inline const double kInradius = std::asinh(1.0 / std::sqrt(2.0));
/// Centre to vertex; cosh = cot(π/4)·cot(π/6).
inline const double kCircumradius = std::asinh(std::sqrt(2.0));
/// Half the side length; cosh = cos(π/4)/sin(π/6).
inline const double kHalfEdge = std::acosh(std::sqrt(2.0));
/// Distance between the centres of edge-adjacent squares.
inline const double kTranslationLength = 2.0 * kInradius;
/// Klein coordinate of the edge lines x = ±k, y = ±k; vertices sit at (±k, ±k).
inline const double kEdgeKlein = 1.0 / std::sqrt(3.0);
/// Cube height for which the cube's vertices, seen from its centre, are the
/// corners of a euclidean cube in the tangent space.
inline const double kDefaultCubeHeight = std::sqrt(2.0) * kCircumradius;
/// Half-side of that euclidean cube, asinh(√2)/√2.
inline const double kTangentHalfSide = kCircumradius / std::sqrt(2.0);
}  // namespace honeycomb46

struct TilingSpec {
  int p = 4;
  int q = 6;
  int depth = 7;   // horizontal BFS steps
  int layers = 3;  // cells drawn in layers −layers..+layers
  double cube_height = honeycomb46::kDefaultCubeHeight;
  double hue_step = 1.0 / 12.0;  // colour rotation per layer

  void validate() const {
    if (p != 4 || q != 6) throw std::invalid_argument("only the {4,6} tiling is supported");
    if (depth < 0 || depth > 12) throw std::invalid_argument("depth must be in [0, 12]");
    if (layers < 0) throw std::invalid_argument("layers must be non-negative");
    if (!(cube_height > 0.0)) throw std::invalid_argument("cube_height must be positive");
  }
};

inline IsometryH2E generator(const TilingSpec& spec, Gen g) {
  const double L = honeycomb46::kTranslationLength;
  switch (g) {
    case Gen::A: return translation_from_tangent({L, 0.0, 0.0});
    case Gen::B: return translation_from_tangent({0.0, L, 0.0});
    case Gen::C: return translation_from_tangent({-L, 0.0, 0.0});
    case Gen::D: return translation_from_tangent({0.0, -L, 0.0});
    case Gen::U: return IsometryH2E::translate_z(spec.cube_height);
    case Gen::V: return IsometryH2E::translate_z(-spec.cube_height);
  }
  return {};
}

struct LabeledGenerator {
  Gen label;
  IsometryH2E g;
};

inline std::array<LabeledGenerator, 6> generators(const TilingSpec& spec) {
  spec.validate();
  std::array<LabeledGenerator, 6> out{};
  for (std::size_t i = 0; i < kAllGens.size(); ++i) out[i] = {kAllGens[i], generator(spec, kAllGens[i])};
  return out;
}

/// Isometry spelled by a word (product of generators, left to right).
inline IsometryH2E word_isometry(const TilingSpec& spec, const CellWord& word) {
  IsometryH2E g;
  for (char c : word.str()) g = iso_compose(g, generator(spec, gen_from_char(c)));
  return g;
}

// ---------------------------------------------------------------------------
// Colouring

struct ColorIndex {
  int base = 0;              // label in the 6-square genus-2 quotient
  double layer_phase = 0.0;  // hue rotation in [0, 1)
};

namespace genus2 {
/// Permutation images of A and B on the six quotient squares. They satisfy
/// the relations of ⟨A, B⟩ around the central cell (R = ABCDAB is the
/// half-turn about its centre: R² = 1, RAR⁻¹ = A⁻¹, RBR⁻¹ = B⁻¹), R fixes
/// square 0, and no generator fixes square 0, so σ(word)(0) is a
/// well-defined proper colouring of the tiles.
inline constexpr std::array<std::uint8_t, 6> kSigmaA{1, 0, 3, 2, 5, 4};
inline constexpr std::array<std::uint8_t, 6> kSigmaB{2, 4, 3, 1, 5, 0};

constexpr std::array<std::uint8_t, 6> inverse_perm(const std::array<std::uint8_t, 6>& p) {
  std::array<std::uint8_t, 6> out{};
  for (std::uint8_t i = 0; i < 6; ++i) out[p[i]] = i;
  return out;
}

inline constexpr std::array<std::array<std::uint8_t, 6>, 4> kSigma{kSigmaA, kSigmaB, inverse_perm(kSigmaA),
                                                                   inverse_perm(kSigmaB)};

/// σ(word)(0), composing from the rightmost letter; U/V act trivially.
inline int label_of(const CellWord& word) {
  int c = 0;
  const std::string& s = word.str();
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    const Gen g = gen_from_char(*it);
    if (is_horizontal(g)) c = kSigma[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)];
  }
  return c;
}
}  // namespace genus2

/// Colour of the cell at local word `word` when the camera's central cell is
/// the world cell `offset`.
inline ColorIndex color_of(const CellWord& word, const CellWord& offset, double hue_step = 1.0 / 12.0) {
  const CellWord world = offset * word;
  double phase = std::fmod(hue_step * world.layer(), 1.0);
  if (phase < 0.0) phase += 1.0;
  if (phase >= 1.0) phase = 0.0;
  return {genus2::label_of(world), phase};
}

// ---------------------------------------------------------------------------
// Honeycomb generation

struct Cell {
  CellWord word;
  IsometryH2E g;  // central cell → this cell
  int layer = 0;
  ColorIndex color;
};

namespace detail {
/// Nearest-neighbour lookup of origin images, tolerance relative to max(1, w).
class CenterIndex {
 public:
  explicit CenterIndex(double tol) : tol_(tol) {}

  /// Index of a stored centre within tolerance of c, or -1.
  long find(const PointH2E& c) const {
    const Key k = key(c);
    for (long dl = -1; dl <= 1; ++dl)
      for (long dx = -1; dx <= 1; ++dx)
        for (long dy = -1; dy <= 1; ++dy) {
          auto it = buckets_.find(Key{k.l + dl, k.x + dx, k.y + dy});
          if (it == buckets_.end()) continue;
          for (long idx : it->second) {
            const PointH2E& o = centers_[static_cast<std::size_t>(idx)];
            const double scale = std::max(1.0, c.v.w);
            const double d = std::hypot(o.v.x - c.v.x, o.v.y - c.v.y, o.v.w - c.v.w);
            if (d <= tol_ * scale) return idx;
          }
        }
    return -1;
  }

  long insert(const PointH2E& c) {
    centers_.push_back(c);
    const long idx = static_cast<long>(centers_.size()) - 1;
    buckets_[key(c)].push_back(idx);
    return idx;
  }

 private:
  struct Key {
    long l, x, y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<long>{}(k.l);
      h = h * 1000003u ^ std::hash<long>{}(k.x);
      h = h * 1000003u ^ std::hash<long>{}(k.y);
      return h;
    }
  };

  static Key key(const PointH2E& c) {
    const double w = c.v.w;
    return {static_cast<long>(std::floor(std::log(w) * 8.0)), static_cast<long>(std::floor(c.v.x / (0.05 * w))),
            static_cast<long>(std::floor(c.v.y / (0.05 * w)))};
  }

  double tol_;
  std::vector<PointH2E> centers_;
  std::unordered_map<Key, std::vector<long>, KeyHash> buckets_;
};
}  // namespace detail

/// One horizontal tile of the {4,6} tiling.
struct Tile {
  CellWord word;
  IsometryH2E g;
};

/// Breadth-first ball of tiles within `depth` steps of the central square,
/// deduplicated by where each isometry sends the origin.
inline std::vector<Tile> build_tiles(int depth) {
  const TilingSpec spec{};
  std::array<IsometryH2E, 4> gens{};
  for (Gen g : kHorizontalGens) gens[static_cast<std::size_t>(g)] = generator(spec, g);

  std::vector<Tile> tiles{Tile{}};
  detail::CenterIndex index(1e-6);
  index.insert(PointH2E::origin());
  std::vector<std::size_t> frontier{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (Gen x : kHorizontalGens) {
        const auto last = tiles[idx].word.last();
        if (last && *last == inverse(x)) continue;
        IsometryH2E g = iso_compose(tiles[idx].g, gens[static_cast<std::size_t>(x)]);
        const PointH2E c = iso_apply(g, PointH2E::origin());
        if (index.find(c) >= 0) continue;
        g = detail::minkowski_gram_schmidt(g);
        CellWord w = tiles[idx].word;
        w.push_back(x);
        tiles.push_back(Tile{std::move(w), g});
        index.insert(c);
        next.push_back(tiles.size() - 1);
      }
    }
    frontier = std::move(next);
  }
  return tiles;
}

/// Cells of the honeycomb, layer by layer from −layers to +layers, each
/// layer in the horizontal BFS order. Colours are relative to `offset`.
inline std::vector<Cell> build_tiling(const TilingSpec& spec, const CellWord& offset = {}) {
  spec.validate();
  const std::vector<Tile> tiles = build_tiles(spec.depth);
  std::vector<Cell> cells;
  cells.reserve(tiles.size() * static_cast<std::size_t>(2 * spec.layers + 1));
  for (int k = -spec.layers; k <= spec.layers; ++k) {
    for (const Tile& t : tiles) {
      CellWord w = t.word;
      for (int i = 0; i < std::abs(k); ++i) w.push_back(k > 0 ? Gen::U : Gen::V);
      IsometryH2E g = t.g;
      g.dz = k * spec.cube_height;
      Cell cell{w, g, k, color_of(w, offset, spec.hue_step)};
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

/// Recompute every cell's colour for a new teleport offset.
inline void recolor(std::vector<Cell>& cells, const CellWord& offset, double hue_step = 1.0 / 12.0) {
  for (Cell& c : cells) c.color = color_of(c.word, offset, hue_step);
}

// ---------------------------------------------------------------------------
// Central-cell membership and teleportation

/// Signed distance of p past each face of the central cube, in label order
/// A, B, C, D, U, V; positive means outside that face.
inline std::array<double, 6> face_excess(const PointH2E& p, const TilingSpec& spec) {
  const double k = honeycomb46::kEdgeKlein;
  const double norm = std::sqrt(1.0 - k * k);
  // ⟨p, n⟩ for the unit spacelike pole n of each edge line is sinh of the
  // signed distance to that line.
  const double a = (p.v.x - k * p.v.w) / norm;
  const double b = (p.v.y - k * p.v.w) / norm;
  const double c = (-p.v.x - k * p.v.w) / norm;
  const double d = (-p.v.y - k * p.v.w) / norm;
  const double half = spec.cube_height / 2.0;
  return {std::asinh(a), std::asinh(b), std::asinh(c), std::asinh(d), p.v.z - half, -p.v.z - half};
}

struct CellTestResult {
  bool inside_central = true;
  std::optional<Gen> exit_label;
};

/// Inside (boundary included) or the face crossed furthest, ties to the
/// earlier label.
inline CellTestResult cell_test(const PointH2E& p, const TilingSpec& spec) {
  const auto excess = face_excess(p, spec);
  std::optional<Gen> best;
  double best_excess = 0.0;
  for (std::size_t i = 0; i < excess.size(); ++i) {
    if (excess[i] > best_excess) {
      best_excess = excess[i];
      best = kAllGens[i];
    }
  }
  return {!best.has_value(), best};
}

/// Teleport bound: a camera more than this many cells out is a logic error.
inline constexpr int kMaxTeleports = 64;

/// Pull the camera back into the central cell through the face it left,
/// repeatedly, appending each crossed face to the offset word.
inline std::pair<CameraPose, CellWord> teleport(CameraPose pose, const TilingSpec& spec, CellWord offset) {
  for (int i = 0; i < kMaxTeleports; ++i) {
    const auto test = cell_test(iso_apply(pose.loc, PointH2E::origin()), spec);
    if (test.inside_central) return {pose, offset};
    pose.loc = iso_compose(generator(spec, inverse(*test.exit_label)), pose.loc);
    offset.push_back(*test.exit_label);
  }
  throw std::runtime_error("teleport: camera did not return to the central cell");
}

/// Same as teleport() but on a tracked pose; returns the number of jumps.
inline int teleport(PoseTracker& tracker, const TilingSpec& spec, CellWord& offset) {
  for (int i = 0; i < kMaxTeleports; ++i) {
    const auto test = cell_test(iso_apply(tracker.pose().loc, PointH2E::origin()), spec);
    if (test.inside_central) return i;
    tracker.premultiply(generator(spec, inverse(*test.exit_label)));
    offset.push_back(*test.exit_label);
  }
  throw std::runtime_error("teleport: camera did not return to the central cell");
}

}  // namespace h2xe
