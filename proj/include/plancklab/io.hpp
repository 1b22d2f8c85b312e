// JSON serialisation of measures and run summaries, plus CSV writers.
//
// Measure documents follow the schema
//   { "atomic_weight": a, "atoms": [{"angle": t, "mass": m}, ...],
//     "continuous_weight": b,
//     "density": {"family": "uniform" | "piecewise_constant",
//                 "pieces": [{"begin": x, "end": y, "height": h}, ...]} }
// with the density object omitted when the continuous weight is zero.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "plancklab/empirical.hpp"
#include "plancklab/eigenfunction.hpp"
#include "plancklab/measure.hpp"
#include "plancklab/version.hpp"

namespace plancklab {

using json = nlohmann::json;

inline json measure_to_json(const SpectralMeasure& mu) {
  mu.validate();
  json doc;
  doc["atomic_weight"] = mu.atomic_weight();
  doc["atoms"] = json::array();
  for (const auto& a : mu.atoms())
    doc["atoms"].push_back({{"angle", a.angle}, {"mass", a.mass}});
  doc["continuous_weight"] = mu.continuous_weight();
  if (mu.continuous_weight() > 0.0) {
    json density;
    density["family"] = mu.density_family() == DensityFamily::uniform
                            ? "uniform"
                            : "piecewise_constant";
    if (mu.density_family() == DensityFamily::piecewise_constant) {
      density["pieces"] = json::array();
      for (const auto& p : mu.density_pieces())
        density["pieces"].push_back(
            {{"begin", p.begin}, {"end", p.end}, {"height", p.height}});
    }
    doc["density"] = density;
  }
  return doc;
}

inline SpectralMeasure measure_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("measure document must be an object");
  const double alpha = doc.value("atomic_weight", 0.0);
  const double beta = doc.value("continuous_weight", 0.0);

  SpectralMeasure atomic_part;
  if (alpha > 0.0) {
    std::vector<MeasureAtom> atoms;
    for (const auto& a : doc.at("atoms"))
      atoms.push_back({a.at("angle").get<double>(), a.at("mass").get<double>()});
    atomic_part = SpectralMeasure::purely_atomic(std::move(atoms));
  }

  SpectralMeasure continuous_part;
  if (beta > 0.0) {
    const auto& density = doc.at("density");
    const std::string family = density.at("family").get<std::string>();
    if (family == "uniform") {
      continuous_part = SpectralMeasure::uniform();
    } else if (family == "piecewise_constant") {
      std::vector<DensityPiece> pieces;
      for (const auto& p : density.at("pieces"))
        pieces.push_back({p.at("begin").get<double>(), p.at("end").get<double>(),
                          p.at("height").get<double>()});
      continuous_part = SpectralMeasure::piecewise_constant(std::move(pieces));
    } else {
      throw std::invalid_argument("unsupported density family: " + family);
    }
  }

  if (alpha > 0.0 && beta > 0.0)
    return SpectralMeasure::mixture(alpha, atomic_part, beta, continuous_part);
  if (alpha > 0.0) return atomic_part;
  if (beta > 0.0) return continuous_part;
  throw std::invalid_argument("measure document has zero total weight");
}

inline SpectralMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open measure file: " + path);
  json doc;
  in >> doc;
  return measure_from_json(doc);
}

inline void save_measure(const std::string& path, const SpectralMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write measure file: " + path);
  out << measure_to_json(mu).dump(2) << '\n';
}

// Every run summary embeds the resolved configuration and artifact version.
// Worker counts are an execution detail, not configuration: summaries must
// be byte-identical across schedules.
inline json make_summary(const std::string& command, json config) {
  json doc;
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["config"] = std::move(config);
  return doc;
}

inline void validate_summary(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("summary must be a JSON object");
  for (const char* key : {"version", "command", "config"})
    if (!doc.contains(key))
      throw std::invalid_argument(std::string("summary missing required key: ") + key);
  if (!doc.at("config").is_object())
    throw std::invalid_argument("summary config must be an object");
}

inline void write_mass_csv(const std::string& path, const std::vector<MassSample>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  out << "x1,x2,r,value\n";
  char line[160];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", row.x1, row.x2, row.r,
                  row.value);
    out << line;
  }
}

inline void write_values_csv(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  out << "value\n";
  char line[64];
  for (const double v : values) {
    std::snprintf(line, sizeof(line), "%.17g\n", v);
    out << line;
  }
}

}  // namespace plancklab
