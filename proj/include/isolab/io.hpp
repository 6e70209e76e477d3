#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "isolab/bray.hpp"
#include "isolab/cmc.hpp"
#include "isolab/iso_mass.hpp"
#include "isolab/manifold.hpp"
#include "isolab/mass_center.hpp"
#include "isolab/quasilocal.hpp"
#include "isolab/spectrum.hpp"

namespace isolab {

/// Flat key = value configuration with dotted section prefixes. Lines
/// starting with '#' are comments. Environment variables override file
/// values: ISOLAB_MANIFOLD_N maps to manifold.n.
class Config {
 public:
  static Config from_stream(std::istream& is);
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  void apply_environment(const std::string& prefix = "ISOLAB_");
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// builds the manifold description from manifold.* / perturbation.* keys
ManifoldSpec manifold_from_config(const Config& config);

/// Schema and range checks plus regime warnings. Entries prefixed "error:"
/// make the configuration unusable; the rest are diagnostics.
std::vector<std::string> validate_config(const Config& config);

/// CSV with 17-significant-digit floats
void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
void write_csv_file(const std::string& path, const std::vector<std::string>& columns,
                    const std::vector<std::vector<double>>& rows);

std::string format_double(double v);  // 17 significant digits

// JSON form of the reports (and back, for the round-trip contract)
nlohmann::json json_of(const SpectrumReport& rep);
SpectrumReport spectrum_from_json(const nlohmann::json& j);
nlohmann::json json_of(const CenterReport& rep, int dim);
CenterReport center_from_json(const nlohmann::json& j);
nlohmann::json json_of(const MassEstimate& est);
MassEstimate mass_estimate_from_json(const nlohmann::json& j);
nlohmann::json json_of(const OffCenterCheck& check);
nlohmann::json json_of(const ChartSolution& chart);  // header only; table goes to CSV
nlohmann::json json_of(const NewtonReport& rep);
nlohmann::json json_of(const ContinuationReport& rep);
nlohmann::json json_of(const HawkingProfileResult& rep);
nlohmann::json json_of(const ComConvergenceReport& rep, int dim);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace isolab
