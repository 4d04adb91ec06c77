#include "fringestep/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace fringestep {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FileFormatError(context + ": expected a number, got '" + text + "'");
  }
}

std::uint64_t parse_uint64(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FileFormatError(context + ": expected an unsigned integer, got '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FileFormatError(context + ": expected an integer, got '" + text + "'");
  }
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

float byteswap_float(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  bits = ((bits & 0x000000ffu) << 24) | ((bits & 0x0000ff00u) << 8) |
         ((bits & 0x00ff0000u) >> 8) | ((bits & 0xff000000u) >> 24);
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

// Reads one whitespace-delimited ASCII token from a binary stream.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF && std::isspace(ch)) {
  }
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return tok;
}

constexpr bool kHostLittleEndian = std::endian::native == std::endian::little;

}  // namespace

void write_pfm(const std::string& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("write_pfm: cannot open '" + path + "' for writing");
  out << "Pf\n" << f.cols() << " " << f.rows() << "\n" << (kHostLittleEndian ? "-1.0" : "1.0")
      << "\n";
  std::vector<float> row(static_cast<std::size_t>(f.cols()));
  for (Eigen::Index r = f.rows() - 1; r >= 0; --r) {  // bottom row first
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = static_cast<float>(f(r, c));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw FileFormatError("write_pfm: write failed for '" + path + "'");
}

ScalarField read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("read_pfm: cannot open '" + path + "'");
  const std::string magic = next_token(in);
  if (magic != "Pf") {
    throw FileFormatError("read_pfm: '" + path + "' is not a grayscale PFM (magic '" + magic +
                          "')");
  }
  const int width = parse_int(next_token(in), "read_pfm: " + path + " width");
  const int height = parse_int(next_token(in), "read_pfm: " + path + " height");
  const double scale = parse_double(next_token(in), "read_pfm: " + path + " scale");
  if (width < 1 || height < 1) {
    throw FileFormatError("read_pfm: '" + path + "' has invalid dimensions");
  }
  if (scale == 0.0) {
    throw FileFormatError("read_pfm: '" + path + "' has zero scale factor");
  }
  // The token reader consumed exactly one whitespace byte after the scale;
  // binary samples start here, bottom row first.
  const bool file_little = scale < 0.0;
  const double magnitude = std::abs(scale);
  ScalarField f(height, width);
  std::vector<float> row(static_cast<std::size_t>(width));
  for (Eigen::Index r = height - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw FileFormatError("read_pfm: '" + path + "' is truncated");
    for (Eigen::Index c = 0; c < width; ++c) {
      float v = row[static_cast<std::size_t>(c)];
      if (file_little != kHostLittleEndian) v = byteswap_float(v);
      f(r, c) = magnitude * static_cast<double>(v);
    }
  }
  return f;
}

void write_pgm_preview(const std::string& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("write_pgm_preview: cannot open '" + path + "' for writing");
  const double lo = f.minCoeff();
  const double hi = f.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  out << "P5\n" << f.cols() << " " << f.rows() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(f.cols()));
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
      const double t = (f(r, c) - lo) / span;
      row[static_cast<std::size_t>(c)] = static_cast<unsigned char>(std::lround(t * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw FileFormatError("write_pgm_preview: write failed for '" + path + "'");
}

const char* const kResultCsvHeader =
    "case,prefilter,estimator,sigma,trial,delta_true,delta_hat,abs_err,status,kappa_ratio,"
    "mask_fraction,seed";

void write_result_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
  if (!out) throw FileFormatError("write_result_csv: cannot open '" + path + "' for writing");
  out << kResultCsvHeader << "\n";
  for (const ExperimentRecord& rec : records) {
    const bool ok = rec.status == TrialStatus::Ok;
    out << fringe_case_name(rec.fringe_case) << ',' << prefilter_name(rec.prefilter) << ','
        << estimator_name(rec.estimator) << ',' << format_double(rec.sigma) << ',' << rec.trial
        << ',' << format_double(rec.delta_true) << ',' << (ok ? format_double(rec.delta_hat) : "")
        << ',' << (ok ? format_double(rec.abs_err) : "") << ',' << (ok ? "ok" : "failed") << ','
        << format_double(rec.kappa_ratio) << ',' << format_double(rec.mask_fraction) << ','
        << rec.seed << "\n";
  }
  if (!out) throw FileFormatError("write_result_csv: write failed for '" + path + "'");
}

std::vector<ExperimentRecord> read_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("read_result_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw FileFormatError("read_result_csv: '" + path + "' is empty (missing header)");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultCsvHeader) {
    throw FileFormatError("read_result_csv: '" + path + "' line 1: unexpected header");
  }
  std::vector<ExperimentRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string context = "read_result_csv: '" + path + "' line " + std::to_string(line_no);
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != 12) {
      throw FileFormatError(context + ": expected 12 columns, got " +
                            std::to_string(cols.size()));
    }
    ExperimentRecord rec;
    try {
      rec.fringe_case = parse_fringe_case(cols[0]);
      rec.prefilter = parse_prefilter(cols[1]);
      rec.estimator = parse_estimator(cols[2]);
    } catch (const std::invalid_argument& e) {
      throw FileFormatError(context + ": " + e.what());
    }
    rec.sigma = parse_double(cols[3], context);
    rec.trial = parse_int(cols[4], context);
    rec.delta_true = parse_double(cols[5], context);
    if (cols[8] == "ok") {
      rec.status = TrialStatus::Ok;
      rec.delta_hat = parse_double(cols[6], context);
      rec.abs_err = parse_double(cols[7], context);
    } else if (cols[8] == "failed") {
      rec.status = TrialStatus::Failed;
      if (!cols[6].empty() || !cols[7].empty()) {
        throw FileFormatError(context + ": failed rows must leave delta_hat/abs_err empty");
      }
      rec.delta_hat = std::numeric_limits<double>::quiet_NaN();
      rec.abs_err = std::numeric_limits<double>::quiet_NaN();
    } else {
      throw FileFormatError(context + ": status must be ok or failed, got '" + cols[8] + "'");
    }
    rec.kappa_ratio = parse_double(cols[9], context);
    rec.mask_fraction = parse_double(cols[10], context);
    rec.seed = parse_uint64(cols[11], context);
    records.push_back(rec);
  }
  return records;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("load_plan: cannot open '" + path + "'");
  ExperimentPlan plan;
  plan.sigmas = default_sigma_levels();
  bool sigmas_set = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::string context = "load_plan: '" + path + "' line " + std::to_string(line_no);
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw FileFormatError(context + ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (value.empty()) throw FileFormatError(context + ": empty value");

    if (key == "combo") {
      const std::vector<std::string> parts = split(value, ',');
      if (parts.size() != 3) {
        throw FileFormatError(context + ": combo needs 'CASE, PREFILTER, ESTIMATOR'");
      }
      try {
        plan.combos.push_back({parse_fringe_case(trim(parts[0])),
                               parse_prefilter(trim(parts[1])),
                               parse_estimator(trim(parts[2]))});
      } catch (const std::invalid_argument& e) {
        throw FileFormatError(context + ": " + e.what());
      }
    } else if (key == "sigmas") {
      plan.sigmas.clear();
      for (const std::string& tok : split(value, ',')) {
        plan.sigmas.push_back(parse_double(trim(tok), context));
      }
      sigmas_set = true;
    } else if (key == "trials") {
      plan.trials = parse_int(value, context);
    } else if (key == "delta") {
      plan.delta_true = parse_double(value, context);
    } else if (key == "base_seed") {
      plan.base_seed = parse_uint64(value, context);
    } else if (key == "width") {
      plan.image.width = parse_int(value, context);
    } else if (key == "height") {
      plan.image.height = parse_int(value, context);
    } else if (key == "fringe_scale") {
      plan.image.fringe_scale = parse_double(value, context);
    } else {
      throw FileFormatError(context + ": unknown key '" + key + "'");
    }
  }
  (void)sigmas_set;
  if (plan.combos.empty()) {
    throw FileFormatError("load_plan: '" + path + "' lists no combo lines");
  }
  try {
    validate_plan(plan);
  } catch (const std::invalid_argument& e) {
    throw FileFormatError("load_plan: '" + path + "': " + e.what());
  }
  return plan;
}

void write_synth_meta(const std::string& path, const SynthSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("write_synth_meta: cannot open '" + path + "' for writing");
  out << "case = " << fringe_case_name(spec.fringe_case) << "\n"
      << "delta = " << format_double(spec.delta) << "\n"
      << "sigma = " << format_double(spec.sigma) << "\n"
      << "seed = " << spec.seed << "\n"
      << "width = " << spec.width << "\n"
      << "height = " << spec.height << "\n"
      << "fringe_scale = " << format_double(spec.fringe_scale) << "\n";
  if (!out) throw FileFormatError("write_synth_meta: write failed for '" + path + "'");
}

}  // namespace fringestep
