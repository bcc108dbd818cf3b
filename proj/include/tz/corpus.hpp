#pragma once

// Built-in surfaces with their expected classification.

#include "tz/surface.hpp"

#include <string>
#include <vector>

namespace tz::surface {

enum class Classification { Superminimal, MinimalNotSuperminimal, NonMinimal };

const char* to_string(Classification c);

struct CorpusEntry {
  std::string name;
  geom::ModelKind model;
  std::array<std::string, 4> formulas;
  Domain domain;
  Classification expected;
  std::string provenance;   // why the expectation holds
  std::string orientation;  // orientation convention used for the surface
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry& corpus_entry(const std::string& name);
bool is_corpus_name(const std::string& name);

ImmersedSurface make_surface(const CorpusEntry& entry, const Grid& grid = {});
ImmersedSurface make_surface(const std::string& name, const Grid& grid = {});

/// Names of the corpus surfaces expected to be superminimal, in corpus order.
std::vector<std::string> superminimal_names();

}  // namespace tz::surface
