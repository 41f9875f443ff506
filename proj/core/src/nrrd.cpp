#include "ecrseg/nrrd.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ecrseg {

static_assert(std::endian::native == std::endian::little,
              "raw payloads are little-endian; big-endian hosts are unsupported");

namespace {

enum class ScalarType { U8, I16, U16, F32, F64 };

std::size_t width_of(ScalarType t) {
  switch (t) {
    case ScalarType::U8: return 1;
    case ScalarType::I16:
    case ScalarType::U16: return 2;
    case ScalarType::F32: return 4;
    case ScalarType::F64: return 8;
  }
  return 0;
}

ScalarType parse_type(const std::string& s) {
  if (s == "uint8" || s == "uchar" || s == "unsigned char") return ScalarType::U8;
  if (s == "int16" || s == "short" || s == "signed short") return ScalarType::I16;
  if (s == "uint16" || s == "ushort" || s == "unsigned short") return ScalarType::U16;
  if (s == "float32" || s == "float") return ScalarType::F32;
  if (s == "float64" || s == "double") return ScalarType::F64;
  throw UnsupportedEncoding("nrrd: unsupported scalar type '" + s + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Header {
  std::map<std::string, std::string> fields;
  std::streampos payload_start = 0;

  bool has(const std::string& k) const { return fields.count(k) > 0; }
  const std::string& get(const std::string& k) const {
    auto it = fields.find(k);
    if (it == fields.end()) throw MalformedHeader("nrrd: missing required field '" + k + "'");
    return it->second;
  }
};

Header parse_header(std::ifstream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader("nrrd: empty file " + path.string());
  if (trim(line).rfind("NRRD", 0) != 0) {
    throw MalformedHeader("nrrd: missing NRRD magic in " + path.string());
  }
  Header h;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) break;  // header/payload separator
    if (t[0] == '#') continue;
    const auto colon = t.find(": ");
    if (colon == std::string::npos) {
      // also accept "key:value" with no space
      const auto c2 = t.find(':');
      if (c2 == std::string::npos) throw MalformedHeader("nrrd: bad header line '" + t + "'");
      h.fields[trim(t.substr(0, c2))] = trim(t.substr(c2 + 1));
      continue;
    }
    h.fields[trim(t.substr(0, colon))] = trim(t.substr(colon + 2));
  }
  h.payload_start = in.tellg();
  return h;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::string cleaned;
  cleaned.reserve(s.size());
  for (char c : s) cleaned.push_back((c == '(' || c == ')' || c == ',') ? ' ' : c);
  std::istringstream iss(cleaned);
  double v;
  while (iss >> v) out.push_back(v);
  return out;
}

std::vector<char> read_payload(std::ifstream& in, const Header& h,
                               const std::filesystem::path& header_path,
                               std::size_t expected_bytes) {
  std::vector<char> bytes;
  if (h.has("data file")) {
    const std::filesystem::path data_path =
        header_path.parent_path() / h.get("data file");
    std::ifstream din(data_path, std::ios::binary);
    if (!din) throw IoFailure("nrrd: cannot open detached payload " + data_path.string());
    din.seekg(0, std::ios::end);
    const auto size = din.tellg();
    din.seekg(0, std::ios::beg);
    if (std::size_t(size) != expected_bytes) {
      throw DimensionMismatch("nrrd: detached payload size does not match sizes product");
    }
    bytes.resize(expected_bytes);
    din.read(bytes.data(), std::streamsize(expected_bytes));
    if (!din) throw IoFailure("nrrd: short read from " + data_path.string());
  } else {
    in.seekg(0, std::ios::end);
    const auto file_end = in.tellg();
    const std::size_t available = std::size_t(file_end - h.payload_start);
    if (available != expected_bytes) {
      throw DimensionMismatch("nrrd: attached payload size does not match sizes product");
    }
    in.seekg(h.payload_start);
    bytes.resize(expected_bytes);
    in.read(bytes.data(), std::streamsize(expected_bytes));
    if (!in) throw IoFailure("nrrd: short read from " + header_path.string());
  }
  return bytes;
}

}  // namespace

Volume read_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("nrrd: cannot open " + path.string());
  const Header h = parse_header(in, path);

  if (h.get("dimension") != "3") {
    throw MalformedHeader("nrrd: dimension must be 3, got '" + h.get("dimension") + "'");
  }
  const std::vector<double> sizes = parse_doubles(h.get("sizes"));
  if (sizes.size() != 3 || sizes[0] < 1 || sizes[1] < 1 || sizes[2] < 1) {
    throw MalformedHeader("nrrd: sizes must list three positive extents");
  }
  const ScalarType type = parse_type(h.get("type"));
  if (h.get("encoding") != "raw") {
    throw UnsupportedEncoding("nrrd: encoding must be raw, got '" + h.get("encoding") + "'");
  }
  if (h.get("endian") != "little") {
    throw UnsupportedEncoding("nrrd: endian must be little, got '" + h.get("endian") + "'");
  }

  Geometry g;
  g.dims = {int(sizes[0]), int(sizes[1]), int(sizes[2])};
  if (h.has("spacings")) {
    const std::vector<double> sp = parse_doubles(h.get("spacings"));
    if (sp.size() != 3 || sp[0] <= 0 || sp[1] <= 0 || sp[2] <= 0) {
      throw MalformedHeader("nrrd: spacings must list three positive values");
    }
    const double rel = std::max(std::abs(sp[1] - sp[0]), std::abs(sp[2] - sp[0]));
    if (rel > 1e-12 * std::abs(sp[0])) {
      throw MalformedHeader("nrrd: anisotropic spacings are not supported");
    }
    g.spacing = sp[0];
  }
  if (h.has("space origin")) {
    const std::vector<double> o = parse_doubles(h.get("space origin"));
    if (o.size() != 3) throw MalformedHeader("nrrd: space origin must have three components");
    g.origin = {o[0], o[1], o[2]};
  }

  const std::size_t n = std::size_t(g.voxel_count());
  const std::vector<char> bytes = read_payload(in, h, path, n * width_of(type));

  Volume v(g);
  const char* p = bytes.data();
  switch (type) {
    case ScalarType::U8:
      for (std::size_t i = 0; i < n; ++i) v.data[i] = double(std::uint8_t(p[i]));
      break;
    case ScalarType::I16: {
      for (std::size_t i = 0; i < n; ++i) {
        std::int16_t x;
        std::memcpy(&x, p + 2 * i, 2);
        v.data[i] = double(x);
      }
      break;
    }
    case ScalarType::U16: {
      for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t x;
        std::memcpy(&x, p + 2 * i, 2);
        v.data[i] = double(x);
      }
      break;
    }
    case ScalarType::F32: {
      for (std::size_t i = 0; i < n; ++i) {
        float x;
        std::memcpy(&x, p + 4 * i, 4);
        v.data[i] = double(x);
      }
      break;
    }
    case ScalarType::F64:
      std::memcpy(v.data.data(), p, n * 8);
      break;
  }
  return v;
}

namespace {

void write_header(std::ofstream& out, const Geometry& g, const char* type) {
  out << "NRRD0004\n";
  out << "# ecrseg volume\n";
  out << "type: " << type << "\n";
  out << "dimension: 3\n";
  out << "sizes: " << g.dims[0] << " " << g.dims[1] << " " << g.dims[2] << "\n";
  out << "encoding: raw\n";
  out << "endian: little\n";
  out.precision(17);
  out << "spacings: " << g.spacing << " " << g.spacing << " " << g.spacing << "\n";
  out << "space origin: (" << g.origin[0] << "," << g.origin[1] << "," << g.origin[2] << ")\n";
  out << "\n";
}

}  // namespace

void write_volume(const Volume& v, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("nrrd: cannot open for write: " + path.string());
  write_header(out, v.geom, "float64");
  out.write(reinterpret_cast<const char*>(v.data.data()),
            std::streamsize(v.data.size() * sizeof(double)));
  if (!out) throw IoFailure("nrrd: write failed: " + path.string());
}

Mask read_mask(const std::filesystem::path& path) {
  const Volume v = read_volume(path);
  Mask m(v.geom);
  for (std::size_t i = 0; i < v.data.size(); ++i) m.data[i] = (v.data[i] != 0.0);
  return m;
}

void write_mask(const Mask& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("nrrd: cannot open for write: " + path.string());
  write_header(out, m.geom, "uint8");
  out.write(reinterpret_cast<const char*>(m.data.data()), std::streamsize(m.data.size()));
  if (!out) throw IoFailure("nrrd: write failed: " + path.string());
}

}  // namespace ecrseg
