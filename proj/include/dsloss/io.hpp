#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dsloss/signal.hpp"

namespace dsloss {

enum class DataFormat { Csv, RawF64le, WavPcm16 };

DataFormat parse_format(const std::string& name);
std::string format_name(DataFormat f);

// Loads a labeled dataset.
//
// csv:        path is the CSV file; one signal per row, first column the
//             label, remaining columns the samples. A manifest.json next
//             to the file may supply sample_rate_hz (default 1 Hz).
// raw-f64le:  path is a manifest.json (or a directory containing one)
//             listing {files: [{path, label}], sample_rate_hz, format};
//             each file is a little-endian float64 dump of one signal.
// wav-pcm16:  like raw-f64le but files are mono 16-bit PCM WAV; samples
//             are normalised to [-1, 1) and the header rate must agree
//             with the manifest when both are present.
LabeledDataset load_dataset(const std::filesystem::path& path, DataFormat format);

void save_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path);

void save_signal_raw(const Signal& signal, const std::filesystem::path& path);

// Writes the files of a dataset in raw-f64le form plus the manifest that
// load_dataset expects.
void save_dataset_raw(const LabeledDataset& ds, const std::filesystem::path& dir);

std::vector<double> read_raw_f64le(const std::filesystem::path& path);

}  // namespace dsloss
