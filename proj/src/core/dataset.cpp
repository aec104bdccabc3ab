#include "dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "pgm.hpp"

namespace floss {

namespace {

const Schema& manifest_schema() {
    static const Schema schema = {
        {"id", ColumnType::kText},        {"image", ColumnType::kText},
        {"mask", ColumnType::kText},      {"width", ColumnType::kInt},
        {"height", ColumnType::kInt},     {"n_images", ColumnType::kInt},
        {"blobs_min", ColumnType::kInt},  {"blobs_max", ColumnType::kInt},
        {"fg_lo", ColumnType::kReal},     {"fg_hi", ColumnType::kReal},
        {"bg_lo", ColumnType::kReal},     {"bg_hi", ColumnType::kReal},
        {"noise_sigma", ColumnType::kReal}, {"seed", ColumnType::kText},
    };
    return schema;
}

} // namespace

void write_kv_config(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    for (const auto& [key, value] : entries) {
        out << key << "=" << value << "\n";
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::map<std::string, std::string> read_kv_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                              " is not key=value");
        }
        entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return entries;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

void write_dataset(const std::vector<Sample>& samples, const SynthConfig& config,
                   const std::filesystem::path& dir) {
    ensure_dir(dir / "images");
    ensure_dir(dir / "masks");

    std::vector<CsvRow> rows;
    rows.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        char img_name[24];
        char mask_name[24];
        std::snprintf(img_name, sizeof img_name, "img_%05zu.pgm", k);
        std::snprintf(mask_name, sizeof mask_name, "gt_%05zu.pgm", k);
        write_pgm(samples[k].image, dir / "images" / img_name);
        write_pgm(samples[k].mask.as_saliency(), dir / "masks" / mask_name);
        rows.push_back({samples[k].id,
                        std::string("images/") + img_name,
                        std::string("masks/") + mask_name,
                        static_cast<std::int64_t>(config.width),
                        static_cast<std::int64_t>(config.height),
                        static_cast<std::int64_t>(config.n_images),
                        static_cast<std::int64_t>(config.blobs_min),
                        static_cast<std::int64_t>(config.blobs_max),
                        config.fg_lo, config.fg_hi, config.bg_lo, config.bg_hi,
                        config.noise_sigma, std::to_string(config.seed)});
    }
    write_csv(manifest_schema(), rows, dir / "manifest.csv");
    write_kv_config(dir / "config.txt",
                    {{"width", std::to_string(config.width)},
                     {"height", std::to_string(config.height)},
                     {"n_images", std::to_string(config.n_images)},
                     {"blobs_min", std::to_string(config.blobs_min)},
                     {"blobs_max", std::to_string(config.blobs_max)},
                     {"fg_lo", format_real(config.fg_lo)},
                     {"fg_hi", format_real(config.fg_hi)},
                     {"bg_lo", format_real(config.bg_lo)},
                     {"bg_hi", format_real(config.bg_hi)},
                     {"noise_sigma", format_real(config.noise_sigma)},
                     {"seed", std::to_string(config.seed)}});
}

std::vector<Sample> load_dataset(const std::filesystem::path& dir) {
    const std::vector<CsvRow> rows = read_csv(dir / "manifest.csv", manifest_schema());
    if (rows.empty()) {
        throw ArgumentError(dir.string() + ": manifest lists no samples");
    }
    std::vector<Sample> samples;
    samples.reserve(rows.size());
    for (const auto& row : rows) {
        const auto& image_rel = std::get<std::string>(row[1]);
        const auto& mask_rel = std::get<std::string>(row[2]);
        SaliencyMap image = read_pgm(dir / image_rel).map;
        BinaryMap mask = read_binary_pgm(dir / mask_rel);
        require_same_shape(image, mask, (dir / mask_rel).string().c_str());
        FeatureStack features = extract_features(image);
        samples.push_back(Sample{std::filesystem::path(mask_rel).stem().string(),
                                 std::move(image), std::move(mask),
                                 std::move(features)});
    }
    return samples;
}

std::map<std::string, std::filesystem::path> list_pgm_stems(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError(dir.string() + " is not a directory");
    }
    std::map<std::string, std::filesystem::path> stems;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            stems[entry.path().stem().string()] = entry.path();
        }
    }
    return stems;
}

std::vector<EvalPair> pair_directories(const std::filesystem::path& pred_dir,
                                       const std::filesystem::path& gt_dir) {
    const auto preds = list_pgm_stems(pred_dir);
    const auto gts = list_pgm_stems(gt_dir);
    if (preds.empty()) {
        throw ArgumentError(pred_dir.string() + " contains no .pgm predictions");
    }
    std::string missing;
    for (const auto& [stem, path] : preds) {
        if (gts.find(stem) == gts.end()) {
            missing += missing.empty() ? stem : ", " + stem;
        }
    }
    if (!missing.empty()) {
        throw ArgumentError("predictions without ground truth: " + missing);
    }
    std::vector<EvalPair> pairs;
    pairs.reserve(preds.size());
    for (const auto& [stem, path] : preds) {
        SaliencyMap pred = read_pgm(path).map;
        BinaryMap gt = read_binary_pgm(gts.at(stem));
        if (!shape_compatible(pred, gt)) {
            throw DimensionError(path.string() + " is " + std::to_string(pred.width()) +
                                 "x" + std::to_string(pred.height()) + " but " +
                                 gts.at(stem).string() + " is " +
                                 std::to_string(gt.width()) + "x" +
                                 std::to_string(gt.height()));
        }
        pairs.push_back({stem, std::move(pred), std::move(gt)});
    }
    return pairs;
}

} // namespace floss
