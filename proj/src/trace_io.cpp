#include "isacsim/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace channel {

namespace {

constexpr const char* kMagic = "ISACSIM_TRACE v1";
const char* kEchoVariantNames[2] = {"echo_los", "echo_nlos"};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LineReader {
  std::istream& in;
  int line_no = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      return true;
    }
    return false;
  }
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw ParseError("trace parse error at line " + std::to_string(line) + ": " +
                   what);
}

double parse_number(const std::string& tok, int line, int field) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    parse_fail(line, "field " + std::to_string(field) +
                         ": not a number: '" + tok + "'");
  }
}

// header line "key value"
std::string expect_keyed(LineReader& r, const std::string& key) {
  std::string line;
  if (!r.next(line)) parse_fail(r.line_no + 1, "unexpected end of file");
  std::istringstream is(line);
  std::string k, v;
  if (!(is >> k >> v) || k != key) {
    parse_fail(r.line_no, "expected '" + key + " <value>', got '" + line + "'");
  }
  std::string extra;
  if (is >> extra) parse_fail(r.line_no, "trailing tokens after " + key);
  return v;
}

int to_int(const std::string& v, int line, const std::string& key) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    parse_fail(line, key + ": not an integer: '" + v + "'");
  }
}

void write_matrix(std::ostream& out, const CMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << fmt_double(m(i, j).real()) << ',' << fmt_double(m(i, j).imag());
    }
    out << '\n';
  }
}

CMat read_matrix(LineReader& r, int rows, int cols, const std::string& block) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    std::string line;
    if (!r.next(line)) {
      throw SchemaError("trace: block '" + block + "' truncated at row " +
                        std::to_string(i));
    }
    std::istringstream is(line);
    std::string tok;
    int j = 0;
    while (is >> tok) {
      if (j >= cols) {
        throw SchemaError("trace: block '" + block + "' row " +
                          std::to_string(i) + " has more than " +
                          std::to_string(cols) + " entries");
      }
      const auto comma = tok.find(',');
      if (comma == std::string::npos) {
        parse_fail(r.line_no, "field " + std::to_string(j + 1) +
                                  ": missing ',' in complex entry");
      }
      const double re = parse_number(tok.substr(0, comma), r.line_no, j + 1);
      const double im = parse_number(tok.substr(comma + 1), r.line_no, j + 1);
      m(i, j) = cplx(re, im);
      ++j;
    }
    if (j != cols) {
      throw SchemaError("trace: block '" + block + "' row " +
                        std::to_string(i) + " has " + std::to_string(j) +
                        " entries, expected " + std::to_string(cols));
    }
  }
  return m;
}

}  // namespace

void save_trace(std::ostream& out, const SubcarrierChannelSet& set,
                const TraceHeader& header) {
  out << kMagic << '\n';
  out << "k_subcarriers " << header.k_subcarriers << '\n';
  out << "n_t " << header.n_t << '\n';
  out << "n_r " << header.n_r << '\n';
  out << "n_radar " << header.n_radar << '\n';
  out << "carrier_freq_hz " << fmt_double(header.carrier_freq_hz) << '\n';
  out << "bandwidth_hz " << fmt_double(header.bandwidth_hz) << '\n';
  for (Object o : kObjects) {
    const ObjectChannels& oc = set.of(o);
    const std::vector<CMat>* groups[4] = {&oc.los, &oc.nlos, &oc.echo_los,
                                          &oc.echo_nlos};
    const char* names[4] = {"los", "nlos", kEchoVariantNames[0],
                            kEchoVariantNames[1]};
    for (int g = 0; g < 4; ++g) {
      for (int k = 0; k < header.k_subcarriers; ++k) {
        out << "object " << object_name(o) << " variant " << names[g]
            << " subcarrier " << k << '\n';
        write_matrix(out, groups[g]->at(k));
      }
    }
  }
}

void save_trace_file(const std::string& path, const SubcarrierChannelSet& set,
                     const TraceHeader& header) {
  std::ofstream out(path);
  if (!out) throw ParseError("trace: cannot open for writing: " + path);
  save_trace(out, set, header);
}

SubcarrierChannelSet load_trace(std::istream& in, TraceHeader* header_out) {
  LineReader r{in};
  std::string line;
  if (!r.next(line)) parse_fail(1, "empty input");
  if (line != kMagic) {
    parse_fail(r.line_no, std::string("expected '") + kMagic + "'");
  }
  TraceHeader h;
  h.k_subcarriers =
      to_int(expect_keyed(r, "k_subcarriers"), r.line_no, "k_subcarriers");
  h.n_t = to_int(expect_keyed(r, "n_t"), r.line_no, "n_t");
  h.n_r = to_int(expect_keyed(r, "n_r"), r.line_no, "n_r");
  h.n_radar = to_int(expect_keyed(r, "n_radar"), r.line_no, "n_radar");
  h.carrier_freq_hz =
      parse_number(expect_keyed(r, "carrier_freq_hz"), r.line_no, 2);
  h.bandwidth_hz = parse_number(expect_keyed(r, "bandwidth_hz"), r.line_no, 2);
  if (h.k_subcarriers <= 0 || h.n_t <= 0 || h.n_r <= 0 || h.n_radar <= 0) {
    throw SchemaError("trace: header dimensions must be positive");
  }

  SubcarrierChannelSet set;
  set.freqs_hz =
      subcarrier_frequencies(h.carrier_freq_hz, h.bandwidth_hz,
                             h.k_subcarriers);
  for (Object o : kObjects) {
    ObjectChannels& oc = set.of(o);
    std::vector<CMat>* groups[4] = {&oc.los, &oc.nlos, &oc.echo_los,
                                    &oc.echo_nlos};
    const char* names[4] = {"los", "nlos", kEchoVariantNames[0],
                            kEchoVariantNames[1]};
    const bool is_user = o != Object::target;
    for (int g = 0; g < 4; ++g) {
      const int rows = (g >= 2) ? h.n_radar : (is_user ? h.n_r : h.n_radar);
      for (int k = 0; k < h.k_subcarriers; ++k) {
        const std::string block = std::string(object_name(o)) + "/" +
                                  names[g] + "/k" + std::to_string(k);
        if (!r.next(line)) {
          throw SchemaError("trace: missing section '" + block + "'");
        }
        std::istringstream is(line);
        std::string w_obj, obj, w_var, var, w_k, kk;
        if (!(is >> w_obj >> obj >> w_var >> var >> w_k >> kk) ||
            w_obj != "object" || w_var != "variant" || w_k != "subcarrier") {
          parse_fail(r.line_no,
                     "expected 'object <o> variant <v> subcarrier <k>'");
        }
        if (obj != object_name(o) || var != names[g] ||
            kk != std::to_string(k)) {
          throw SchemaError("trace: expected section '" + block + "', found '" +
                            obj + "/" + var + "/k" + kk + "'");
        }
        groups[g]->push_back(read_matrix(r, rows, h.n_t, block));
      }
    }
    oc.active = Variant::los;
    oc.blockage_db = 0.0;
  }
  std::string extra;
  while (r.next(extra)) {
    if (!extra.empty()) {
      parse_fail(r.line_no, "trailing content after final block");
    }
  }
  if (header_out) *header_out = h;
  return set;
}

SubcarrierChannelSet load_trace_file(const std::string& path,
                                     TraceHeader* header_out) {
  std::ifstream in(path);
  if (!in) throw ParseError("trace: cannot open: " + path);
  return load_trace(in, header_out);
}

}  // namespace channel
}  // namespace isacsim
