#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metrics.hpp"
#include "synth.hpp"

namespace floss {

// Plain key=value lines, one per entry, written in the given order.
// Deterministic: callers must not put timestamps in entries they intend
// to compare across runs.
void write_kv_config(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& entries);

std::map<std::string, std::string> read_kv_config(const std::filesystem::path& path);

void ensure_dir(const std::filesystem::path& dir);

// Dataset layout under `dir`: images/img_%05d.pgm, masks/gt_%05d.pgm,
// manifest.csv (id, relative paths, config echo), config.txt.
void write_dataset(const std::vector<Sample>& samples, const SynthConfig& config,
                   const std::filesystem::path& dir);

// Reloads a written dataset; features are recomputed from the stored images.
// Sample ids take the mask filename stem so predictions written under those
// ids pair with the mask directory by stem.
std::vector<Sample> load_dataset(const std::filesystem::path& dir);

// Stem -> path for every *.pgm directly inside `dir`, sorted by stem.
std::map<std::string, std::filesystem::path> list_pgm_stems(
    const std::filesystem::path& dir);

// Pairs pred_dir/*.pgm with gt files of the same stem. Every prediction must
// have a ground truth (missing stems raise ArgumentError listing them);
// extra ground-truth stems are ignored. Shape mismatches raise DimensionError
// naming the files.
std::vector<EvalPair> pair_directories(const std::filesystem::path& pred_dir,
                                       const std::filesystem::path& gt_dir);

} // namespace floss
