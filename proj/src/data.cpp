#include "ecoamlp/data.hpp"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace ecoamlp {

namespace {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

// Finite decimal reals only; "nan"/"inf" are rejected.
std::optional<double> parse_real(std::string_view cell) {
    if (cell.empty()) {
        return std::nullopt;
    }
    if (cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

[[noreturn]] void row_error(const std::string& source, std::size_t line, std::size_t column, const std::string& what) {
    std::ostringstream os;
    os << source << ": row " << line << ", column " << column << ": " << what;
    throw DataError(os.str());
}

std::optional<int> parse_label(std::string_view cell, const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (cell == labels[i]) {
            return static_cast<int>(i);
        }
    }
    // "1.0" matches label "1".
    if (const auto value = parse_real(cell)) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (const auto label_value = parse_real(labels[i]); label_value && *label_value == *value) {
                return static_cast<int>(i);
            }
        }
    }
    return std::nullopt;
}

} // namespace

Schema::Schema(std::vector<FeatureDescriptor> features, std::vector<std::string> class_labels)
    : features_(std::move(features)), class_labels_(std::move(class_labels)) {
    std::unordered_set<std::string> seen;
    for (const auto& f : features_) {
        if (f.name.empty()) {
            throw DataError("schema: feature names must be non-empty");
        }
        if (!seen.insert(f.name).second) {
            throw DataError("schema: duplicate feature name '" + f.name + "'");
        }
    }
    if (class_labels_.size() != 2 || class_labels_[0] == class_labels_[1]) {
        throw DataError("schema: exactly two distinct class labels are required");
    }
}

bool Schema::all_numeric() const noexcept {
    return std::all_of(features_.begin(), features_.end(),
                       [](const FeatureDescriptor& f) { return f.kind == FeatureKind::numeric; });
}

std::vector<FeatureKind> Schema::kinds() const {
    std::vector<FeatureKind> out;
    out.reserve(features_.size());
    for (const auto& f : features_) {
        out.push_back(f.kind);
    }
    return out;
}

std::size_t Schema::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == name) {
            return i;
        }
    }
    throw DataError("schema: no feature named '" + name + "'");
}

Dataset::Dataset(Schema schema, std::vector<Instance> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {
    std::unordered_set<InstanceId> ids;
    ids.reserve(instances_.size());
    const auto n_labels = static_cast<int>(schema_.class_labels().size());
    for (const auto& inst : instances_) {
        if (inst.features.size() != schema_.arity()) {
            throw DataError("dataset: instance " + std::to_string(inst.id) + " has " +
                            std::to_string(inst.features.size()) + " features, schema has " +
                            std::to_string(schema_.arity()));
        }
        if (inst.label < 0 || inst.label >= n_labels) {
            throw DataError("dataset: instance " + std::to_string(inst.id) + " has invalid label");
        }
        for (double v : inst.features) {
            if (!std::isfinite(v)) {
                throw DataError("dataset: instance " + std::to_string(inst.id) + " has a non-finite feature");
            }
        }
        if (!ids.insert(inst.id).second) {
            throw DataError("dataset: duplicate instance id " + std::to_string(inst.id));
        }
    }
}

std::size_t Dataset::index_of(InstanceId id) const {
    // Ids are usually ascending, so try a binary search before a scan.
    const auto it = std::lower_bound(instances_.begin(), instances_.end(), id,
                                     [](const Instance& inst, InstanceId key) { return inst.id < key; });
    if (it != instances_.end() && it->id == id) {
        return static_cast<std::size_t>(it - instances_.begin());
    }
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        if (instances_[i].id == id) {
            return i;
        }
    }
    throw DataError("dataset: unknown instance id " + std::to_string(id));
}

bool Dataset::contains(InstanceId id) const {
    return std::any_of(instances_.begin(), instances_.end(), [id](const Instance& inst) { return inst.id == id; });
}

std::vector<InstanceId> Dataset::ids() const {
    std::vector<InstanceId> out;
    out.reserve(instances_.size());
    for (const auto& inst : instances_) {
        out.push_back(inst.id);
    }
    return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(schema_.class_labels().size(), 0);
    for (const auto& inst : instances_) {
        ++counts[static_cast<std::size_t>(inst.label)];
    }
    return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> positions) const {
    std::vector<Instance> picked;
    picked.reserve(positions.size());
    for (std::size_t p : positions) {
        picked.push_back(instances_.at(p));
    }
    return Dataset(schema_, std::move(picked));
}

Schema pidd_schema() {
    std::vector<FeatureDescriptor> features;
    for (const char* name : {"pregnancies", "glucose", "blood_pressure", "skin_thickness", "insulin", "bmi",
                             "diabetes_pedigree", "age"}) {
        features.push_back({name, FeatureKind::numeric, {}});
    }
    return Schema(std::move(features), {"0", "1"});
}

Schema infer_numeric_schema(const std::string& text, std::vector<std::string> class_labels) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line) && trim(line).empty()) {
    }
    if (trim(line).empty()) {
        throw DataError("empty dataset");
    }
    const auto cells = split_cells(line);
    if (cells.size() < 2) {
        throw DataError("csv: need at least one feature column and a label column");
    }
    bool header = false;
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        header = header || !parse_real(cells[j]);
    }
    std::vector<FeatureDescriptor> features;
    for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
        std::string name = header ? std::string(cells[j]) : "feature_" + std::to_string(j + 1);
        features.push_back({std::move(name), FeatureKind::numeric, {}});
    }
    return Schema(std::move(features), std::move(class_labels));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    return parse_csv(read_text_file(path), schema, path.string());
}

Dataset parse_csv(const std::string& text, const Schema& schema, const std::string& source) {
    Schema out_schema = schema;
    for (std::size_t j = 0; j < out_schema.arity(); ++j) {
        out_schema.feature(j).categories.clear();
    }
    const std::size_t arity = schema.arity();

    std::vector<Instance> instances;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(lines, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_cells(line);

        if (first_row) {
            first_row = false;
            bool is_header = false;
            bool any_numeric = false;
            for (std::size_t j = 0; j < arity && j < cells.size(); ++j) {
                if (schema.features()[j].kind == FeatureKind::numeric) {
                    any_numeric = true;
                    if (!parse_real(cells[j])) {
                        is_header = true;
                    }
                }
            }
            if (!any_numeric && cells.size() == arity + 1) {
                is_header = true;
                for (std::size_t j = 0; j < arity; ++j) {
                    is_header = is_header && cells[j] == schema.features()[j].name;
                }
            }
            if (is_header) {
                continue;
            }
        }

        if (cells.size() != arity + 1) {
            row_error(source, line_no, cells.size(),
                      "expected " + std::to_string(arity + 1) + " columns, found " + std::to_string(cells.size()));
        }
        Instance inst;
        inst.features.resize(arity);
        for (std::size_t j = 0; j < arity; ++j) {
            const auto cell = cells[j];
            if (cell.empty()) {
                row_error(source, line_no, j + 1, "missing value");
            }
            auto& desc = out_schema.feature(j);
            if (desc.kind == FeatureKind::numeric) {
                const auto value = parse_real(cell);
                if (!value) {
                    row_error(source, line_no, j + 1, "cannot parse '" + std::string(cell) + "' as a number");
                }
                inst.features[j] = *value;
            } else {
                auto it = std::find(desc.categories.begin(), desc.categories.end(), cell);
                if (it == desc.categories.end()) {
                    desc.categories.emplace_back(cell);
                    it = desc.categories.end() - 1;
                }
                inst.features[j] = static_cast<double>(it - desc.categories.begin());
            }
        }
        const auto label = parse_label(cells[arity], schema.class_labels());
        if (!label) {
            row_error(source, line_no, arity + 1, "unknown class label '" + std::string(cells[arity]) + "'");
        }
        inst.label = *label;
        inst.id = instances.size();
        inst.source_id = inst.id;
        instances.push_back(std::move(inst));
    }
    if (instances.empty()) {
        throw DataError(source + ": empty dataset");
    }
    return Dataset(std::move(out_schema), std::move(instances));
}

Dataset transform_nominal(const Dataset& dataset) {
    if (dataset.schema().all_numeric()) {
        return dataset;
    }
    Schema schema = dataset.schema();
    std::vector<Instance> instances(dataset.instances().begin(), dataset.instances().end());
    for (std::size_t j = 0; j < schema.arity(); ++j) {
        auto& desc = schema.feature(j);
        if (desc.kind != FeatureKind::nominal) {
            continue;
        }
        std::unordered_map<double, double> ordinal;
        std::vector<std::string> ordered;
        for (auto& inst : instances) {
            const double code = inst.features[j];
            auto [it, inserted] = ordinal.try_emplace(code, static_cast<double>(ordinal.size()));
            if (inserted) {
                const auto c = static_cast<std::size_t>(code);
                ordered.push_back(c < desc.categories.size() ? desc.categories[c] : std::to_string(c));
            }
            inst.features[j] = it->second;
        }
        desc.kind = FeatureKind::numeric;
        desc.categories.clear();
    }
    return Dataset(std::move(schema), std::move(instances));
}

Dataset drop_features(const Dataset& dataset, std::span<const std::string> names) {
    if (names.empty()) {
        return dataset;
    }
    std::vector<bool> drop(dataset.arity(), false);
    for (const auto& name : names) {
        drop[dataset.schema().feature_index(name)] = true;
    }
    std::vector<FeatureDescriptor> kept;
    for (std::size_t j = 0; j < dataset.arity(); ++j) {
        if (!drop[j]) {
            kept.push_back(dataset.schema().features()[j]);
        }
    }
    std::vector<Instance> instances;
    instances.reserve(dataset.size());
    for (const auto& inst : dataset.instances()) {
        Instance copy = inst;
        copy.features.clear();
        for (std::size_t j = 0; j < dataset.arity(); ++j) {
            if (!drop[j]) {
                copy.features.push_back(inst.features[j]);
            }
        }
        instances.push_back(std::move(copy));
    }
    return Dataset(Schema(std::move(kept), dataset.schema().class_labels()), std::move(instances));
}

void SplitSpec::validate() const {
    for (double f : {train_fraction, validation_fraction, test_fraction}) {
        if (!(f > 0.0 && f < 1.0)) {
            throw ConfigError("split: every fraction must lie in (0, 1)");
        }
    }
    if (std::abs(train_fraction + validation_fraction + test_fraction - 1.0) > 1e-9) {
        throw ConfigError("split: fractions must sum to 1");
    }
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    const auto n_d = static_cast<double>(n);
    auto n_val = static_cast<std::size_t>(std::llround(spec.validation_fraction * n_d));
    auto n_test = static_cast<std::size_t>(std::llround(spec.test_fraction * n_d));
    n_val = std::min(n_val, n);
    n_test = std::min(n_test, n - n_val);
    return {n - n_val - n_test, n_val, n_test};
}

namespace {

// Largest-remainder apportionment of `total` across groups of the given
// sizes; ties go to the lower group index.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<std::size_t>& group_sizes, std::size_t n) {
    std::vector<std::size_t> quota(group_sizes.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < group_sizes.size(); ++c) {
        const double exact = static_cast<double>(total) * static_cast<double>(group_sizes[c]) / static_cast<double>(n);
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total && i < remainders.size(); ++i) {
        ++quota[remainders[i].second];
        ++assigned;
    }
    return quota;
}

std::vector<std::size_t> positions_by_ascending_id(const Dataset& dataset, std::span<const std::size_t> positions) {
    std::vector<std::size_t> out(positions.begin(), positions.end());
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return dataset[a].id < dataset[b].id; });
    return out;
}

} // namespace

DataSplit split(const Dataset& dataset, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = dataset.size();
    if (n < 3) {
        throw DataError("split: need at least 3 instances, have " + std::to_string(n));
    }
    const auto sizes = split_sizes(n, spec);

    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) {
        all[i] = i;
    }
    const auto by_id = positions_by_ascending_id(dataset, all);

    Xoshiro256 rng(spec.seed);
    std::array<std::vector<std::size_t>, 3> parts;

    if (!spec.stratified) {
        auto order = by_id;
        shuffle(std::span(order), rng);
        std::size_t cursor = 0;
        for (std::size_t s = 0; s < 3; ++s) {
            parts[s].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                            order.begin() + static_cast<std::ptrdiff_t>(cursor + sizes[s]));
            cursor += sizes[s];
        }
    } else {
        const auto counts = dataset.class_counts();
        const auto val_quota = apportion(sizes[1], counts, n);
        const auto test_quota = apportion(sizes[2], counts, n);
        for (std::size_t c = 0; c < counts.size(); ++c) {
            std::vector<std::size_t> members;
            for (std::size_t p : by_id) {
                if (static_cast<std::size_t>(dataset[p].label) == c) {
                    members.push_back(p);
                }
            }
            shuffle(std::span(members), rng);
            const std::size_t n_val = std::min(val_quota[c], members.size());
            const std::size_t n_test = std::min(test_quota[c], members.size() - n_val);
            const std::size_t n_train = members.size() - n_val - n_test;
            const auto begin = members.begin();
            parts[0].insert(parts[0].end(), begin, begin + static_cast<std::ptrdiff_t>(n_train));
            parts[1].insert(parts[1].end(), begin + static_cast<std::ptrdiff_t>(n_train),
                            begin + static_cast<std::ptrdiff_t>(n_train + n_val));
            parts[2].insert(parts[2].end(), begin + static_cast<std::ptrdiff_t>(n_train + n_val), members.end());
        }
    }

    for (auto& part : parts) {
        part = positions_by_ascending_id(dataset, part);
    }
    return DataSplit{dataset.subset(parts[0]), dataset.subset(parts[1]), dataset.subset(parts[2])};
}

} // namespace ecoamlp
