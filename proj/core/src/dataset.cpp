#include "ssarf/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ssarf/error.hpp"
#include "ssarf/random.hpp"

namespace ssarf {

namespace {

    auto normalize_token(std::string_view s) -> std::string
    {
        std::string out;
        for (char c : s) {
            auto const u = static_cast<unsigned char>(c);
            if (std::isalnum(u) != 0) {
                out.push_back(static_cast<char>(std::tolower(u)));
            }
        }
        return out;
    }

    auto trim(std::string_view s) -> std::string_view
    {
        auto const* ws = " \t\r\n";
        auto b = s.find_first_not_of(ws);
        if (b == std::string_view::npos) {
            return {};
        }
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    }

    // Splits one CSV line; double quotes group fields and "" escapes a quote.
    auto split_csv_line(std::string_view line) -> std::vector<std::string>
    {
        std::vector<std::string> fields;
        std::string current;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char const c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        current.push_back('"');
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    current.push_back(c);
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.emplace_back(trim(current));
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        fields.emplace_back(trim(current));
        return fields;
    }

    enum Column : std::size_t { kAge, kGender, kHeadset, kDuration, kMotionSickness, kImmersion, kColumnCount };

    struct Alias {
        Column column;
        std::string_view normalized;
    };

    constexpr std::array kAliases{
        Alias{kAge, "age"},
        Alias{kGender, "gender"},
        Alias{kHeadset, "vrheadset"},
        Alias{kHeadset, "headset"},
        Alias{kDuration, "duration"},
        Alias{kMotionSickness, "motionsickness"},
        Alias{kImmersion, "immersionlevel"},
        Alias{kImmersion, "immersion"},
    };

    auto parse_int(std::string_view text, std::size_t row, const std::string& column) -> int
    {
        int value = 0;
        auto const* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (ec != std::errc{} || ptr != end) {
            // Accept integral values written with a fractional part, e.g. "40.0".
            double real = 0.0;
            auto [p2, ec2] = std::from_chars(text.data(), end, real);
            if (ec2 == std::errc{} && p2 == end && std::isfinite(real) && real == std::trunc(real)
                && std::abs(real) < 1e9) {
                return static_cast<int>(real);
            }
            throw RowError(row, column, "cannot parse '" + std::string(text) + "' as an integer");
        }
        return value;
    }

    auto parse_real(std::string_view text, std::size_t row, const std::string& column) -> double
    {
        double value = 0.0;
        auto const* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
            throw RowError(row, column, "cannot parse '" + std::string(text) + "' as a number");
        }
        return value;
    }

    auto format_real(double v) -> std::string
    {
        std::array<char, 64> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return {buf.data(), ptr};
    }

} // namespace

auto parse_gender(std::string_view text) -> Gender
{
    auto const key = normalize_token(text);
    if (key == "female") {
        return Gender::Female;
    }
    if (key == "male") {
        return Gender::Male;
    }
    if (key == "other") {
        return Gender::Other;
    }
    throw std::invalid_argument("unknown gender category '" + std::string(text) + "'");
}

auto parse_headset(std::string_view text) -> Headset
{
    auto const key = normalize_token(text);
    if (key == "htcvive") {
        return Headset::HtcVive;
    }
    if (key == "oculusrift") {
        return Headset::OculusRift;
    }
    if (key == "playstationvr") {
        return Headset::PlayStationVr;
    }
    throw std::invalid_argument("unknown headset category '" + std::string(text) + "'");
}

auto to_string(Gender g) -> std::string_view
{
    switch (g) {
    case Gender::Female:
        return "Female";
    case Gender::Male:
        return "Male";
    case Gender::Other:
        return "Other";
    }
    return "?";
}

auto to_string(Headset h) -> std::string_view
{
    switch (h) {
    case Headset::HtcVive:
        return "HTC Vive";
    case Headset::OculusRift:
        return "Oculus Rift";
    case Headset::PlayStationVr:
        return "PlayStation VR";
    }
    return "?";
}

void validate(const Record& r)
{
    if (r.age < 0) {
        throw std::invalid_argument("Age must be non-negative, got " + std::to_string(r.age));
    }
    if (r.motion_sickness < 1 || r.motion_sickness > 10) {
        throw std::invalid_argument("MotionSickness " + std::to_string(r.motion_sickness) + " out of range [1,10]");
    }
    if (!(r.duration > 0.0) || !std::isfinite(r.duration)) {
        throw std::invalid_argument("Duration must be positive, got " + format_real(r.duration));
    }
    if (r.immersion != 1 && r.immersion != 2) {
        throw std::invalid_argument("ImmersionLevel must be 1 or 2, got " + std::to_string(r.immersion));
    }
    auto const g = static_cast<int>(r.gender);
    auto const h = static_cast<int>(r.headset);
    if (g < 1 || g > 3 || h < 1 || h > 3) {
        throw std::invalid_argument("categorical code out of range");
    }
}

auto canonical_columns() -> const std::vector<std::string>&
{
    static const std::vector<std::string> names{"Age", "Gender", "VRHeadset", "Duration", "MotionSickness",
                                                "ImmersionLevel"};
    return names;
}

auto feature_columns() -> const std::vector<std::string>&
{
    static const std::vector<std::string> names{"Age", "Gender", "VRHeadset", "Duration", "MotionSickness"};
    return names;
}

auto column_value(const Record& r, std::string_view column) -> double
{
    auto const key = normalize_token(column);
    for (auto const& alias : kAliases) {
        if (alias.normalized != key) {
            continue;
        }
        switch (alias.column) {
        case kAge:
            return r.age;
        case kGender:
            return static_cast<int>(r.gender);
        case kHeadset:
            return static_cast<int>(r.headset);
        case kDuration:
            return r.duration;
        case kMotionSickness:
            return r.motion_sickness;
        case kImmersion:
            return r.immersion;
        default:
            break;
        }
    }
    throw SchemaError("unknown column '" + std::string(column) + "'");
}

auto parse_csv(std::istream& in, const WarningSink& warn) -> Dataset
{
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            have_header = true;
            break;
        }
    }
    if (!have_header) {
        throw EmptyInputError("input is empty: no header row");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }

    auto const header = split_csv_line(line);
    std::array<std::optional<std::size_t>, kColumnCount> position{};
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto const key = normalize_token(header[i]);
        auto it = std::find_if(kAliases.begin(), kAliases.end(), [&](const Alias& a) { return a.normalized == key; });
        if (it == kAliases.end() || position[it->column].has_value()) {
            if (warn) {
                warn("ignoring column '" + header[i] + "'");
            }
            continue;
        }
        position[it->column] = i;
    }
    auto const& names = canonical_columns();
    for (std::size_t c = 0; c < kColumnCount; ++c) {
        if (!position[c]) {
            throw SchemaError("missing required column '" + names[c] + "'");
        }
    }

    Dataset d;
    d.column_names = names;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ++row;
        auto const fields = split_csv_line(line);
        auto cell = [&](Column c) -> std::string_view {
            auto const idx = *position[c];
            if (idx >= fields.size() || fields[idx].empty()) {
                throw RowError(row, names[c], "missing value");
            }
            return fields[idx];
        };

        Record r;
        r.age = parse_int(cell(kAge), row, names[kAge]);
        try {
            r.gender = parse_gender(cell(kGender));
        } catch (const std::invalid_argument& e) {
            throw RowError(row, names[kGender], e.what());
        }
        try {
            r.headset = parse_headset(cell(kHeadset));
        } catch (const std::invalid_argument& e) {
            throw RowError(row, names[kHeadset], e.what());
        }
        r.duration = parse_real(cell(kDuration), row, names[kDuration]);
        r.motion_sickness = parse_int(cell(kMotionSickness), row, names[kMotionSickness]);
        r.immersion = parse_int(cell(kImmersion), row, names[kImmersion]);

        if (r.age < 0) {
            throw RowError(row, names[kAge], "value " + std::to_string(r.age) + " is negative");
        }
        if (!(r.duration > 0.0)) {
            throw RowError(row, names[kDuration], "value " + format_real(r.duration) + " is not positive");
        }
        if (r.motion_sickness < 1 || r.motion_sickness > 10) {
            throw RowError(row, names[kMotionSickness],
                           "value " + std::to_string(r.motion_sickness) + " out of range [1,10]");
        }
        if (r.immersion != 1 && r.immersion != 2) {
            throw RowError(row, names[kImmersion], "value " + std::to_string(r.immersion) + " is not a class in {1,2}");
        }
        d.records.push_back(r);
    }
    return d;
}

auto load_csv(const std::filesystem::path& path, const WarningSink& warn) -> Dataset
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return parse_csv(in, warn);
}

void write_csv(std::ostream& out, const Dataset& d)
{
    auto const& names = canonical_columns();
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i == 0 ? "" : ",") << names[i];
    }
    out << '\n';
    for (auto const& r : d.records) {
        out << r.age << ',' << to_string(r.gender) << ',' << to_string(r.headset) << ',' << format_real(r.duration)
            << ',' << r.motion_sickness << ',' << r.immersion << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Dataset& d)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_csv(out, d);
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

auto deduplicate(const Dataset& d) -> Dataset
{
    Dataset out;
    out.column_names = d.column_names;
    std::set<Record> seen;
    for (auto const& r : d.records) {
        if (seen.insert(r).second) {
            out.records.push_back(r);
        }
    }
    return out;
}

auto remove_outliers_3sigma(const Dataset& d, std::span<const std::string> columns) -> Dataset
{
    Dataset out;
    out.column_names = d.column_names;
    if (d.empty()) {
        return out;
    }

    struct Band {
        std::string column;
        double mu;
        double sigma;
    };
    std::vector<Band> bands;
    std::vector<double> values(d.size());
    for (auto const& column : columns) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            values[i] = column_value(d.records[i], column);
        }
        bands.push_back({column, mean(values), sample_std_dev(values)});
    }

    for (auto const& r : d.records) {
        bool keep = true;
        for (auto const& b : bands) {
            if (b.sigma > 0.0 && std::abs(column_value(r, b.column) - b.mu) > 3.0 * b.sigma) {
                keep = false;
                break;
            }
        }
        if (keep) {
            out.records.push_back(r);
        }
    }
    return out;
}

auto describe(const Dataset& d) -> std::map<std::string, ColumnStats>
{
    if (d.empty()) {
        throw std::invalid_argument("cannot describe an empty dataset");
    }
    std::map<std::string, ColumnStats> out;
    std::vector<double> values(d.size());
    for (auto const& column : canonical_columns()) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            values[i] = column_value(d.records[i], column);
        }
        out.emplace(column, summarize(values));
    }
    return out;
}

auto round_significant(double value, int digits) -> double
{
    if (value == 0.0 || !std::isfinite(value)) {
        return value;
    }
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
    double rounded = 0.0;
    std::from_chars(buf.data(), buf.data() + std::char_traits<char>::length(buf.data()), rounded);
    return rounded;
}

auto stats_to_json(const std::map<std::string, ColumnStats>& stats) -> nlohmann::ordered_json
{
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    auto emit = [&](const std::string& name, const ColumnStats& s) {
        out[name] = {
            {"maximum", round_significant(s.maximum, 6)},
            {"minimum", round_significant(s.minimum, 6)},
            {"mean", round_significant(s.mean, 6)},
            {"std_dev", round_significant(s.std_dev, 6)},
            {"median", round_significant(s.median, 6)},
            {"variance", round_significant(s.variance, 6)},
        };
    };
    for (auto const& name : canonical_columns()) {
        if (auto it = stats.find(name); it != stats.end()) {
            emit(name, it->second);
        }
    }
    for (auto const& [name, s] : stats) {
        if (!out.contains(name)) {
            emit(name, s);
        }
    }
    return out;
}

void FeatureMatrix::append_row(std::span<const double> values)
{
    if (rows_ == 0 && cols_ == 0) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw std::invalid_argument("row arity " + std::to_string(values.size()) + " does not match "
                                    + std::to_string(cols_) + " columns");
    }
    values_.insert(values_.end(), values.begin(), values.end());
    ++rows_;
}

auto FeatureMatrix::take(std::span<const std::size_t> indices) const -> FeatureMatrix
{
    FeatureMatrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

auto LabeledData::take(std::span<const std::size_t> indices) const -> LabeledData
{
    LabeledData out;
    out.features = features.take(indices);
    out.feature_names = feature_names;
    out.labels.reserve(indices.size());
    out.source_rows.reserve(indices.size());
    for (auto i : indices) {
        out.labels.push_back(labels[i]);
        out.source_rows.push_back(source_rows[i]);
    }
    return out;
}

auto encode(const Record& r) -> std::vector<double>
{
    return {static_cast<double>(r.age), static_cast<double>(static_cast<int>(r.gender)),
            static_cast<double>(static_cast<int>(r.headset)), r.duration, static_cast<double>(r.motion_sickness)};
}

auto encode(const Dataset& d) -> LabeledData
{
    LabeledData out;
    out.features = FeatureMatrix(d.size(), feature_columns().size());
    out.feature_names = feature_columns();
    out.labels.reserve(d.size());
    out.source_rows.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto const& r = d.records[i];
        validate(r);
        auto const row = encode(r);
        std::copy(row.begin(), row.end(), out.features.row(i).begin());
        out.labels.push_back(r.immersion);
        out.source_rows.push_back(i);
    }
    return out;
}

namespace {
    // Indices per class label, in ascending label order.
    auto group_by_label(std::span<const int> labels) -> std::map<int, std::vector<std::size_t>>
    {
        std::map<int, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            groups[labels[i]].push_back(i);
        }
        return groups;
    }
} // namespace

auto stratified_partition(std::span<const int> labels, double train_fraction, std::uint64_t seed) -> Partition
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
    auto groups = group_by_label(labels);
    if (groups.size() < 2) {
        throw std::invalid_argument("stratified split needs at least two classes");
    }
    std::size_t total = 0;
    for (auto const& [label, members] : groups) {
        if (members.size() < 2) {
            throw std::invalid_argument("class " + std::to_string(label) + " has fewer than two members");
        }
        total += members.size();
    }

    // Largest-remainder apportionment: each class gets floor(fraction * count)
    // and the rows still missing from round(fraction * total) go to the classes
    // with the largest remainders (ties: larger class, then lower label).
    struct Share {
        std::size_t group;
        std::size_t count;
        double remainder;
    };
    std::vector<Share> shares;
    std::vector<std::size_t> n_train(groups.size());
    std::size_t assigned = 0;
    std::size_t g = 0;
    for (auto const& [label, members] : groups) {
        double const exact = train_fraction * static_cast<double>(members.size());
        n_train[g] = static_cast<std::size_t>(std::floor(exact));
        assigned += n_train[g];
        shares.push_back({g, members.size(), exact - std::floor(exact)});
        ++g;
    }
    auto const target = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(total)));
    std::stable_sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
        if (a.remainder != b.remainder) {
            return a.remainder > b.remainder;
        }
        return a.count > b.count;
    });
    for (std::size_t k = 0; assigned < target && k < shares.size(); ++k) {
        ++n_train[shares[k].group];
        ++assigned;
    }

    Rng rng(seed);
    Partition p;
    g = 0;
    for (auto& [label, members] : groups) {
        std::shuffle(members.begin(), members.end(), rng);
        auto const k = std::clamp<std::size_t>(n_train[g++], 1, members.size() - 1);
        p.train.insert(p.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
        p.test.insert(p.test.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
    }
    std::sort(p.train.begin(), p.train.end());
    std::sort(p.test.begin(), p.test.end());
    return p;
}

auto stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed)
    -> std::vector<std::vector<std::size_t>>
{
    if (folds < 2) {
        throw std::invalid_argument("need at least two folds");
    }
    auto groups = group_by_label(labels);
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> out(folds);
    std::size_t offset = 0;
    for (auto& [label, members] : groups) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i = 0; i < members.size(); ++i) {
            out[(offset + i) % folds].push_back(members[i]);
        }
        offset += members.size();
    }
    for (auto& f : out) {
        std::sort(f.begin(), f.end());
    }
    return out;
}

auto subset(const Dataset& d, std::span<const std::size_t> indices) -> Dataset
{
    Dataset out;
    out.column_names = d.column_names;
    out.records.reserve(indices.size());
    for (auto i : indices) {
        out.records.push_back(d.records.at(i));
    }
    return out;
}

auto stratified_split(const Dataset& d, double train_fraction, std::uint64_t seed) -> std::pair<Dataset, Dataset>
{
    std::vector<int> labels;
    labels.reserve(d.size());
    for (auto const& r : d.records) {
        labels.push_back(r.immersion);
    }
    auto const p = stratified_partition(labels, train_fraction, seed);
    return {subset(d, p.train), subset(d, p.test)};
}

auto make_synthetic_dataset(std::size_t rows, double label_noise, std::uint64_t seed) -> Dataset
{
    Rng rng(seed);
    std::uniform_int_distribution<int> age(18, 60);
    std::uniform_int_distribution<int> category(1, 3);
    std::uniform_int_distribution<int> sickness(1, 10);
    std::uniform_int_distribution<int> duration_cents(500, 5900);

    Dataset d;
    d.column_names = canonical_columns();
    d.records.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Record r;
        r.age = age(rng);
        r.gender = static_cast<Gender>(category(rng));
        r.headset = static_cast<Headset>(category(rng));
        r.duration = duration_cents(rng) / 100.0;
        r.motion_sickness = sickness(rng);
        bool const immersed = (r.duration > 30.0) != (r.motion_sickness > 7);
        bool const flip = uniform01(rng) < label_noise;
        r.immersion = (immersed != flip) ? 2 : 1;
        d.records.push_back(r);
    }
    return d;
}

} // namespace ssarf
