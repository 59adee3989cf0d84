#include "dsloss/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dsloss/error.hpp"

namespace dsloss {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed manifest " + path.string() + ": " + e.what());
  }
  return j;
}

void check_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) throw DataError("non-finite sample at " + where);
}

std::vector<std::string> ordered_classes(const std::vector<std::string>& labels) {
  std::vector<std::string> classes;
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (seen.insert(l).second) classes.push_back(l);
  }
  return classes;
}

LabeledDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  double rate = 1.0;
  const auto manifest_path = path.parent_path() / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    const json m = read_json_file(manifest_path);
    if (m.contains("sample_rate_hz")) rate = m["sample_rate_hz"].get<double>();
    if (rate <= 0.0) throw DataError("manifest: sample_rate_hz must be positive");
  }

  LabeledDataset ds;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) {
      throw DataError("csv row " + std::to_string(row) + ": missing label");
    }
    Signal s;
    s.sample_rate_hz = rate;
    std::size_t col = 1;
    std::string label = cell;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        const double v = std::stod(cell);
        check_finite(v, "row " + std::to_string(row) + " column " + std::to_string(col));
        s.values.push_back(v);
      } catch (const DataError&) {
        throw;
      } catch (const std::exception&) {
        throw DataError("csv row " + std::to_string(row) + " column " +
                        std::to_string(col) + ": not a number: '" + cell + "'");
      }
    }
    if (s.values.empty()) {
      throw DataError("csv row " + std::to_string(row) + ": no samples");
    }
    ds.signals.push_back(std::move(s));
    ds.labels.push_back(label);
  }
  if (ds.signals.empty()) throw DataError("csv " + path.string() + ": no rows");
  ds.class_names = ordered_classes(ds.labels);
  validate_dataset(ds);
  return ds;
}

struct ManifestEntry {
  std::filesystem::path file;
  std::string label;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  double sample_rate_hz = 0.0;
  std::string format;
};

Manifest load_manifest(const std::filesystem::path& path) {
  std::filesystem::path manifest_path = path;
  if (std::filesystem::is_directory(path)) manifest_path = path / "manifest.json";
  const json j = read_json_file(manifest_path);
  Manifest m;
  if (!j.contains("files") || !j["files"].is_array()) {
    throw DataError("manifest: missing 'files' array");
  }
  if (j.contains("sample_rate_hz")) m.sample_rate_hz = j["sample_rate_hz"].get<double>();
  if (j.contains("format")) m.format = j["format"].get<std::string>();
  const auto base = manifest_path.parent_path();
  for (const auto& f : j["files"]) {
    if (!f.contains("path")) throw DataError("manifest: file entry missing 'path'");
    if (!f.contains("label")) {
      throw DataError("manifest: no label for file '" +
                      f["path"].get<std::string>() + "'");
    }
    ManifestEntry e;
    e.file = base / f["path"].get<std::string>();
    e.label = f["label"].get<std::string>();
    m.entries.push_back(std::move(e));
  }
  if (m.entries.empty()) throw DataError("manifest: empty file list");
  return m;
}

struct WavData {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
};

WavData read_wav_pcm16(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  auto read_u32 = [&]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };
  auto read_u16 = [&]() {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  };
  char tag[5] = {0};
  in.read(tag, 4);
  if (std::strncmp(tag, "RIFF", 4) != 0) throw DataError(path.string() + ": not a RIFF file");
  read_u32();  // chunk size
  in.read(tag, 4);
  if (std::strncmp(tag, "WAVE", 4) != 0) throw DataError(path.string() + ": not a WAVE file");

  WavData out;
  std::uint16_t channels = 0, bits = 0;
  bool have_fmt = false;
  while (in.read(tag, 4)) {
    const std::uint32_t size = read_u32();
    if (std::strncmp(tag, "fmt ", 4) == 0) {
      const std::uint16_t audio_format = read_u16();
      channels = read_u16();
      out.sample_rate_hz = static_cast<double>(read_u32());
      read_u32();  // byte rate
      read_u16();  // block align
      bits = read_u16();
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      if (audio_format != 1) throw DataError(path.string() + ": not PCM");
      if (bits != 16) throw DataError(path.string() + ": expected 16-bit samples");
      if (channels != 1) throw DataError(path.string() + ": expected mono audio");
      have_fmt = true;
    } else if (std::strncmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw DataError(path.string() + ": data before fmt chunk");
      const std::size_t n = size / 2;
      out.samples.resize(n);
      std::vector<unsigned char> raw(size);
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(size));
      if (!in) throw DataError(path.string() + ": truncated data chunk");
      for (std::size_t i = 0; i < n; ++i) {
        const std::int16_t v =
            static_cast<std::int16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
        out.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return out;
    } else {
      in.seekg(size + (size % 2), std::ios::cur);
    }
  }
  throw DataError(path.string() + ": no data chunk");
}

}  // namespace

DataFormat parse_format(const std::string& name) {
  if (name == "csv") return DataFormat::Csv;
  if (name == "raw-f64le") return DataFormat::RawF64le;
  if (name == "wav-pcm16") return DataFormat::WavPcm16;
  throw ConfigError("unknown data format '" + name + "'");
}

std::string format_name(DataFormat f) {
  switch (f) {
    case DataFormat::Csv: return "csv";
    case DataFormat::RawF64le: return "raw-f64le";
    case DataFormat::WavPcm16: return "wav-pcm16";
  }
  return "?";
}

std::vector<double> read_raw_f64le(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff bytes = in.tellg();
  in.seekg(0, std::ios::beg);
  if (bytes % 8 != 0) {
    throw DataError(path.string() + ": size is not a multiple of 8 bytes");
  }
  const std::size_t n = static_cast<std::size_t>(bytes / 8);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int k = 7; k >= 0; --k) u = (u << 8) | b[k];
    double v;
    std::memcpy(&v, &u, 8);
    check_finite(v, path.string() + " sample " + std::to_string(i));
    out[i] = v;
  }
  return out;
}

LabeledDataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  if (!std::filesystem::exists(path)) {
    throw DataError("no such path: " + path.string());
  }
  if (format == DataFormat::Csv) return load_csv(path);

  const Manifest m = load_manifest(path);
  if (!m.format.empty() && parse_format(m.format) != format) {
    throw DataError("manifest format '" + m.format + "' does not match requested '" +
                    format_name(format) + "'");
  }
  LabeledDataset ds;
  double rate = m.sample_rate_hz;
  for (const auto& e : m.entries) {
    Signal s;
    if (format == DataFormat::RawF64le) {
      if (m.sample_rate_hz <= 0.0) {
        throw DataError("manifest: raw-f64le needs a positive sample_rate_hz");
      }
      s.values = read_raw_f64le(e.file);
      s.sample_rate_hz = m.sample_rate_hz;
    } else {
      WavData wav = read_wav_pcm16(e.file);
      if (m.sample_rate_hz > 0.0 &&
          std::abs(wav.sample_rate_hz - m.sample_rate_hz) > 1e-6 * m.sample_rate_hz) {
        throw DataError(e.file.string() + ": WAV rate disagrees with manifest");
      }
      s.values = std::move(wav.samples);
      s.sample_rate_hz = wav.sample_rate_hz;
      if (rate <= 0.0) rate = s.sample_rate_hz;
    }
    if (s.values.empty()) throw DataError(e.file.string() + ": empty signal");
    ds.signals.push_back(std::move(s));
    ds.labels.push_back(e.label);
  }
  ds.class_names = ordered_classes(ds.labels);
  validate_dataset(ds);
  return ds;
}

void save_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  for (std::size_t i = 0; i < ds.signals.size(); ++i) {
    out << ds.labels[i];
    for (double v : ds.signals[i].values) out << ',' << v;
    out << '\n';
  }
}

void save_signal_raw(const Signal& signal, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (double v : signal.values) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((u >> (8 * k)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
  }
}

void save_dataset_raw(const LabeledDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "raw-f64le";
  manifest["sample_rate_hz"] = ds.signals.empty() ? 0.0 : ds.signals.front().sample_rate_hz;
  manifest["files"] = nlohmann::json::array();
  for (std::size_t i = 0; i < ds.signals.size(); ++i) {
    const std::string name = "signal_" + std::to_string(i) + ".f64";
    save_signal_raw(ds.signals[i], dir / name);
    manifest["files"].push_back({{"path", name}, {"label", ds.labels[i]}});
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw DataError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace dsloss
