#include "tz/corpus.hpp"

#include <numbers>

namespace tz::surface {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Superminimal: return "superminimal";
    case Classification::MinimalNotSuperminimal: return "minimal-not-superminimal";
    case Classification::NonMinimal: return "non-minimal";
  }
  return "unknown";
}

const std::vector<CorpusEntry>& corpus() {
  using geom::ModelKind;
  static const std::string kChartOrientation =
      "chart orientation dx0^dx1^dx2^dx3; adapted frames use it, so J0 is self-dual";
  static const Domain kSquare{-1.0, 1.0, -1.0, 1.0};
  static const Domain kTorus{0.0, 2.0 * std::numbers::pi, 0.0, 2.0 * std::numbers::pi};
  static const std::vector<CorpusEntry> entries = {
      {"plane_r4", ModelKind::FlatR4, {"u", "v", "0", "0"}, kSquare, Classification::Superminimal,
       "totally geodesic complex line; J0 is constant", kChartOrientation},
      {"graph_z2", ModelKind::FlatR4, {"u", "v", "u^2 - v^2", "2*u*v"}, kSquare,
       Classification::Superminimal,
       "graph of z -> z^2 is a holomorphic curve; J0 equals the constant complex structure", kChartOrientation},
      {"graph_parab", ModelKind::FlatR4, {"u", "v", "u^2", "0"}, kSquare, Classification::NonMinimal,
       "mean curvature 2 at the origin", kChartOrientation},
      {"sphere_tg", ModelKind::RoundS4, {"u", "v", "0", "0"}, kSquare, Classification::Superminimal,
       "great 2-sphere: totally geodesic, so J0 is parallel", kChartOrientation},
      {"clifford", ModelKind::RoundS4,
       {"cos(u)/sqrt(2)", "sin(u)/sqrt(2)", "cos(v)/sqrt(2)", "sin(v)/sqrt(2)"}, kTorus,
       Classification::MinimalNotSuperminimal,
       "minimal in the totally geodesic equatorial 3-sphere; curvature ellipse is a segment",
       kChartOrientation},
      {"cp1_line", ModelKind::FubiniStudyCP2, {"u", "v", "0", "0"}, kSquare, Classification::Superminimal,
       "projective line: holomorphic and totally geodesic", kChartOrientation},
      {"veronese", ModelKind::FubiniStudyCP2, {"sqrt(2)*u", "sqrt(2)*v", "u^2 - v^2", "2*u*v"}, kSquare,
       Classification::Superminimal,
       "conic z -> (sqrt(2) z, z^2) is holomorphic; the Kahler J is parallel and equals J0",
       kChartOrientation},
  };
  return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const CorpusEntry& e : corpus())
    if (e.name == name) return e;
  throw Error(ErrorKind::InvalidArgument, "unknown corpus surface '" + name + "'");
}

bool is_corpus_name(const std::string& name) {
  for (const CorpusEntry& e : corpus())
    if (e.name == name) return true;
  return false;
}

ImmersedSurface make_surface(const CorpusEntry& entry, const Grid& grid) {
  return ImmersedSurface::from_formulas(geom::ManifoldModel{entry.model, 10.0}, entry.formulas, entry.domain,
                                        grid);
}

ImmersedSurface make_surface(const std::string& name, const Grid& grid) {
  return make_surface(corpus_entry(name), grid);
}

std::vector<std::string> superminimal_names() {
  std::vector<std::string> out;
  for (const CorpusEntry& e : corpus())
    if (e.expected == Classification::Superminimal) out.push_back(e.name);
  return out;
}

}  // namespace tz::surface
