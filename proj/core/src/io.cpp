#include "xyq/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "xyq/errors.hpp"

namespace xyq {

namespace {

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw compute_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw compute_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw compute_error("rename failed: " + target.string() + ": " + ec.message());
}

std::string prefix_hash(const std::string& text) {
  std::ostringstream os;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) os << "# " << line << "\n";
  return os.str();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string format_record_csv(const SweepRecord& rec) {
  std::ostringstream os;
  os << fmt(rec.tau) << ',' << fmt(rec.xi) << ',' << rec.r << ','
     << to_string(rec.measure) << ',' << fmt(rec.h) << ',' << fmt(rec.value);
  return os.str();
}

void write_records_csv(const std::string& path, std::vector<SweepRecord> records,
                       const std::string& provenance) {
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) {
              return std::tuple(to_string(a.measure), a.r, a.xi, a.tau, a.h) <
                     std::tuple(to_string(b.measure), b.r, b.xi, b.tau, b.h);
            });
  std::ostringstream os;
  os << "# " << kArtifactVersion << "\n" << prefix_hash(provenance);
  os << "tau,xi,r,measure,h,value\n";
  for (const SweepRecord& rec : records) os << format_record_csv(rec) << "\n";
  write_atomic(path, os.str());
}

void write_fits_json(const std::string& path, std::span<const FitSummaryEntry> fits,
                     const std::string& provenance) {
  nlohmann::json doc;
  doc["version"] = kArtifactVersion;
  doc["config"] = provenance;
  doc["fits"] = nlohmann::json::array();
  for (const FitSummaryEntry& entry : fits) {
    nlohmann::json f;
    switch (entry.fit.kind) {
      case FitResult::Kind::exp_decay: f["kind"] = "exp_decay"; break;
      case FitResult::Kind::power_law: f["kind"] = "power_law"; break;
      case FitResult::Kind::peak: f["kind"] = "peak"; break;
    }
    f["slope_or_exponent"] = entry.fit.slope;
    f["intercept"] = entry.fit.intercept;
    f["tau_m"] = entry.fit.tau_m;
    f["r_squared"] = entry.fit.r_squared;
    f["window_lo"] = entry.fit.window_lo;
    f["window_hi"] = entry.fit.window_hi;
    f["std_err"] = entry.fit.std_err;
    f["measure"] = entry.measure;
    f["r"] = entry.r;
    if (entry.xi) f["xi"] = *entry.xi;
    doc["fits"].push_back(std::move(f));
  }
  write_atomic(path, doc.dump(2) + "\n");
}

}  // namespace xyq
