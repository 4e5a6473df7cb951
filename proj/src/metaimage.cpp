/*
 * volseg: 3D volume resampling and segmentation evaluation toolkit
 *
 * Copyright 2026 The volseg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "volseg/metaimage.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace volseg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

std::size_t element_size(ElementType t) {
  switch (t) {
    case ElementType::UChar: return 1;
    case ElementType::Short: return 2;
    case ElementType::UShort: return 2;
    case ElementType::Float: return 4;
  }
  return 0;
}

ElementType parse_element_type(const std::string& name, const std::string& path) {
  if (name == "MET_UCHAR") return ElementType::UChar;
  if (name == "MET_SHORT") return ElementType::Short;
  if (name == "MET_USHORT") return ElementType::UShort;
  if (name == "MET_FLOAT") return ElementType::Float;
  throw ParseError("unsupported ElementType '" + name + "' in " + path);
}

bool parse_bool(const std::string& v) { return v == "True" || v == "true" || v == "1"; }

void swap_bytes(std::vector<char>& buf, std::size_t width) {
  for (std::size_t i = 0; i + width <= buf.size(); i += width) {
    for (std::size_t a = 0, b = width - 1; a < b; ++a, --b) {
      std::swap(buf[i + a], buf[i + b]);
    }
  }
}

std::string format_g(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof(tmp), "%.10g", v);
  return tmp;
}

void write_header(std::ostream& os, const Dims3& d, const Spacing3& s,
                  const Vec3& o, ElementType t, const std::string& raw_name) {
  os << "ObjectType = Image\n"
     << "NDims = 3\n"
     << "DimSize = " << d.x << " " << d.y << " " << d.z << "\n"
     << "ElementType = " << element_type_name(t) << "\n"
     << "ElementSpacing = " << format_g(s.x) << " " << format_g(s.y) << " "
     << format_g(s.z) << "\n"
     << "Offset = " << format_g(o.x) << " " << format_g(o.y) << " "
     << format_g(o.z) << "\n"
     << "BinaryData = True\n"
     << "BinaryDataByteOrderMSB = False\n"
     << "ElementDataFile = " << raw_name << "\n";
}

void write_files(const std::string& path, const Dims3& d, const Spacing3& s,
                 const Vec3& o, ElementType t, const char* payload,
                 std::size_t payload_bytes) {
  fs::path header_path(path);
  fs::path raw_path = header_path;
  raw_path.replace_extension(".raw");

  std::ofstream hdr(header_path, std::ios::binary);
  if (!hdr) throw IoError("cannot open for writing: " + header_path.string());
  write_header(hdr, d, s, o, t, raw_path.filename().string());
  hdr.flush();
  if (!hdr) throw IoError("failed writing header: " + header_path.string());

  std::ofstream raw(raw_path, std::ios::binary);
  if (!raw) throw IoError("cannot open for writing: " + raw_path.string());
  raw.write(payload, std::streamsize(payload_bytes));
  raw.flush();
  if (!raw) throw IoError("failed writing raw payload: " + raw_path.string());
}

}  // namespace

const char* element_type_name(ElementType t) {
  switch (t) {
    case ElementType::UChar: return "MET_UCHAR";
    case ElementType::Short: return "MET_SHORT";
    case ElementType::UShort: return "MET_USHORT";
    case ElementType::Float: return "MET_FLOAT";
  }
  return "MET_FLOAT";
}

Volume3 read_metaimage(const std::string& path, ElementType* source_type) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open MetaImage header: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("malformed header line '" + line + "' in " + path);
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  for (const char* key : {"NDims", "DimSize", "ElementType", "ElementDataFile"}) {
    if (!kv.count(key)) {
      throw ParseError(std::string("missing mandatory key '") + key + "' in " + path);
    }
  }

  if (kv["NDims"] != "3") {
    throw ParseError("unsupported NDims = " + kv["NDims"] + " in " + path +
                     " (only 3D volumes are supported)");
  }
  if (kv.count("BinaryData") && !parse_bool(kv["BinaryData"])) {
    throw ParseError("ASCII MetaImage data is not supported: " + path);
  }
  if (kv.count("CompressedData") && parse_bool(kv["CompressedData"])) {
    throw ParseError("compressed MetaImage data is not supported: " + path);
  }
  if (kv.count("TransformMatrix")) {
    const std::vector<double> m = parse_doubles(kv["TransformMatrix"]);
    const double identity[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    bool ok = m.size() == 9;
    for (std::size_t i = 0; ok && i < 9; ++i) {
      ok = std::abs(m[i] - identity[i]) <= 1e-9;
    }
    if (!ok) {
      throw GeometryError("unsupported orientation: TransformMatrix in " + path +
                          " is not the identity");
    }
  }

  const std::vector<double> dim_vals = parse_doubles(kv["DimSize"]);
  if (dim_vals.size() != 3) {
    throw ParseError("DimSize must have 3 entries in " + path);
  }
  Dims3 dims{int(dim_vals[0]), int(dim_vals[1]), int(dim_vals[2])};
  validate_dims(dims);

  Spacing3 spacing{1.0, 1.0, 1.0};
  if (kv.count("ElementSpacing")) {
    const std::vector<double> sv = parse_doubles(kv["ElementSpacing"]);
    if (sv.size() != 3) throw ParseError("ElementSpacing must have 3 entries in " + path);
    spacing = {sv[0], sv[1], sv[2]};
  }
  validate_spacing(spacing);

  Vec3 origin{0.0, 0.0, 0.0};
  if (kv.count("Offset")) {
    const std::vector<double> ov = parse_doubles(kv["Offset"]);
    if (ov.size() != 3) throw ParseError("Offset must have 3 entries in " + path);
    origin = {ov[0], ov[1], ov[2]};
  }

  const ElementType etype = parse_element_type(kv["ElementType"], path);

  const std::string data_file = kv["ElementDataFile"];
  if (data_file == "LOCAL" || data_file == "LIST") {
    throw ParseError("ElementDataFile = " + data_file + " is not supported: " + path);
  }
  if (data_file.find('/') != std::string::npos ||
      data_file.find('\\') != std::string::npos) {
    throw ParseError("ElementDataFile must be a same-directory reference: " + path);
  }
  const fs::path raw_path = fs::path(path).parent_path() / data_file;

  std::ifstream raw(raw_path, std::ios::binary | std::ios::ate);
  if (!raw) throw IoError("cannot open raw data file: " + raw_path.string());
  const std::size_t file_size = std::size_t(raw.tellg());
  const std::size_t expected = std::size_t(dims.total()) * element_size(etype);
  if (file_size != expected) {
    throw ParseError("raw file size mismatch for " + raw_path.string() +
                     ": expected " + std::to_string(expected) + " bytes, found " +
                     std::to_string(file_size));
  }
  raw.seekg(0);
  std::vector<char> buf(expected);
  raw.read(buf.data(), std::streamsize(expected));
  if (!raw) throw IoError("failed reading raw data: " + raw_path.string());

  const bool msb = (kv.count("BinaryDataByteOrderMSB") && parse_bool(kv["BinaryDataByteOrderMSB"])) ||
                   (kv.count("ElementByteOrderMSB") && parse_bool(kv["ElementByteOrderMSB"]));
  if (msb) swap_bytes(buf, element_size(etype));

  Volume3 v(dims, spacing, origin);
  const std::size_t n = v.voxels.size();
  switch (etype) {
    case ElementType::UChar: {
      const unsigned char* p = reinterpret_cast<const unsigned char*>(buf.data());
      for (std::size_t i = 0; i < n; ++i) v.voxels[i] = float(p[i]);
      break;
    }
    case ElementType::Short: {
      std::vector<std::int16_t> tmp(n);
      std::memcpy(tmp.data(), buf.data(), expected);
      for (std::size_t i = 0; i < n; ++i) v.voxels[i] = float(tmp[i]);
      break;
    }
    case ElementType::UShort: {
      std::vector<std::uint16_t> tmp(n);
      std::memcpy(tmp.data(), buf.data(), expected);
      for (std::size_t i = 0; i < n; ++i) v.voxels[i] = float(tmp[i]);
      break;
    }
    case ElementType::Float: {
      std::memcpy(v.voxels.data(), buf.data(), expected);
      break;
    }
  }
  validate_finite(v);

  if (source_type) *source_type = etype;
  return v;
}

Mask3 read_metaimage_mask(const std::string& path) {
  return binarize(read_metaimage(path), 0.5);
}

void write_metaimage(const Volume3& v, const std::string& path,
                     ElementType element_type) {
  const std::size_t n = v.voxels.size();
  switch (element_type) {
    case ElementType::Float: {
      write_files(path, v.dims, v.spacing, v.origin, element_type,
                  reinterpret_cast<const char*>(v.voxels.data()), n * 4);
      return;
    }
    case ElementType::UChar:
    case ElementType::Short:
    case ElementType::UShort: {
      const double lo = element_type == ElementType::Short ? -32768.0 : 0.0;
      const double hi = element_type == ElementType::UChar    ? 255.0
                        : element_type == ElementType::Short  ? 32767.0
                                                              : 65535.0;
      std::vector<char> buf(n * element_size(element_type));
      for (std::size_t i = 0; i < n; ++i) {
        const double r = std::round(double(v.voxels[i]));
        if (r < lo || r > hi) {
          throw DataError("voxel value " + std::to_string(v.voxels[i]) +
                          " is not representable as " +
                          element_type_name(element_type));
        }
        if (element_type == ElementType::UChar) {
          buf[i] = char(static_cast<unsigned char>(r));
        } else if (element_type == ElementType::Short) {
          const std::int16_t s = std::int16_t(r);
          std::memcpy(buf.data() + i * 2, &s, 2);
        } else {
          const std::uint16_t u = std::uint16_t(r);
          std::memcpy(buf.data() + i * 2, &u, 2);
        }
      }
      write_files(path, v.dims, v.spacing, v.origin, element_type, buf.data(),
                  buf.size());
      return;
    }
  }
}

void write_metaimage(const Mask3& m, const std::string& path) {
  write_files(path, m.dims, m.spacing, m.origin, ElementType::UChar,
              reinterpret_cast<const char*>(m.voxels.data()), m.voxels.size());
}

}  // namespace volseg
