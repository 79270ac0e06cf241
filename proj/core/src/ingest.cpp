#include "greenprior/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "greenprior/errors.hpp"

namespace greenprior {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// records.hpp helpers

std::optional<BuildingCategory> building_category_from_string(std::string_view s) noexcept {
    if (s == "private") return BuildingCategory::private_owned;
    if (s == "public") return BuildingCategory::public_owned;
    if (s == "misc") return BuildingCategory::miscellaneous;
    return std::nullopt;
}

std::string_view to_string(BuildingCategory c) noexcept {
    switch (c) {
    case BuildingCategory::private_owned: return "private";
    case BuildingCategory::public_owned: return "public";
    case BuildingCategory::miscellaneous: return "misc";
    }
    return "misc";
}

// ---------------------------------------------------------------------------
// Text helpers

namespace {

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void finish_write(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

double rounded6(double v) { return std::round(v * 1e6) / 1e6; }

} // namespace

std::optional<double> parse_double(std::string_view field) noexcept {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    // "-0.000000" and "0.000000" must serialize identically.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string format_roundtrip(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, std::string_view content) {
    auto out = open_for_write(path);
    out << content;
    finish_write(out, path);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Point cloud

PointCloud read_point_cloud(const fs::path& path) {
    const auto lines = read_lines(path);
    PointCloud pc;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (i == 0 && fields.size() == 4 && lower(trim(fields[0])) == "x" &&
            lower(trim(fields[1])) == "y" && lower(trim(fields[2])) == "z" &&
            lower(trim(fields[3])) == "class")
            continue;
        if (fields.size() != 4) throw ParseError(lineno, "expected 4 fields x,y,z,class");
        const auto x = parse_double(fields[0]);
        const auto y = parse_double(fields[1]);
        const auto z = parse_double(fields[2]);
        if (!x || !y || !z) throw ParseError(lineno, "invalid coordinate");
        int code = -1;
        const auto cf = trim(fields[3]);
        const auto [ptr, ec] = std::from_chars(cf.data(), cf.data() + cf.size(), code);
        if (ec != std::errc() || ptr != cf.data() + cf.size())
            throw ParseError(lineno, "invalid class code '" + std::string(cf) + "'");
        const auto cls = point_class_from_code(code);
        if (!cls) throw ParseError(lineno, "unknown class code " + std::to_string(code));
        pc.push_back({*x, *y, *z, *cls});
    }
    if (pc.empty()) throw ValidationError("point cloud '" + path.string() + "' is empty");
    return pc;
}

void write_point_cloud(const PointCloud& pc, const fs::path& path) {
    auto out = open_for_write(path);
    out << "x,y,z,class\n";
    for (const auto& p : pc)
        out << format_roundtrip(p.x) << ',' << format_roundtrip(p.y) << ','
            << format_roundtrip(p.z) << ',' << static_cast<int>(p.cls) << '\n';
    finish_write(out, path);
}

// ---------------------------------------------------------------------------
// GeoJSON

namespace {

Ring ring_from_json(const json& coords, const std::string& where) {
    if (!coords.is_array()) throw ValidationError(where + ": ring is not an array");
    Ring ring;
    for (const auto& c : coords) {
        if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
            throw ValidationError(where + ": invalid coordinate");
        ring.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return ring;
}

json ring_to_json(const Ring& ring) {
    json arr = json::array();
    for (const auto& p : ring) arr.push_back({p.x, p.y});
    return arr;
}

json polygon_to_json(const Polygon& poly) {
    json rings = json::array();
    rings.push_back(ring_to_json(poly.exterior()));
    for (const auto& h : poly.holes()) rings.push_back(ring_to_json(h));
    return {{"type", "Polygon"}, {"coordinates", rings}};
}

const json& features_of(const json& doc, const fs::path& path) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array())
        throw ValidationError("'" + path.string() + "' is not a GeoJSON FeatureCollection");
    return doc["features"];
}

std::string feature_label(const json& feature, std::size_t index) {
    if (feature.is_object() && feature.contains("properties") &&
        feature["properties"].is_object() && feature["properties"].contains("id")) {
        const auto& id = feature["properties"]["id"];
        if (id.is_string()) return "feature '" + id.get<std::string>() + "'";
    }
    return "feature #" + std::to_string(index);
}

} // namespace

std::vector<BuildingAttributes> read_footprints(const fs::path& path) {
    const json doc = read_json(path);
    const json& features = features_of(doc, path);
    std::vector<BuildingAttributes> out;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const json& f = features[i];
        const std::string label = feature_label(f, i);
        if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object())
            throw ValidationError(label + ": missing geometry");
        const json& geom = f["geometry"];
        if (geom.value("type", "") != "Polygon")
            throw ValidationError(label + ": geometry must be a Polygon");
        if (!f.contains("properties") || !f["properties"].is_object())
            throw ValidationError(label + ": missing properties");
        const json& props = f["properties"];

        if (!props.contains("id")) throw ValidationError(label + ": missing property 'id'");
        std::string id;
        if (props["id"].is_string())
            id = props["id"].get<std::string>();
        else if (props["id"].is_number_integer())
            id = std::to_string(props["id"].get<long long>());
        else
            throw ValidationError(label + ": property 'id' must be a string");
        if (id.empty()) throw ValidationError(label + ": empty id");

        if (!props.contains("age_years"))
            throw ValidationError(label + ": missing property 'age_years'");
        const json& age = props["age_years"];
        if (!age.is_number()) throw ValidationError(label + ": 'age_years' must be a number");
        const double age_v = age.get<double>();
        if (!(age_v >= 0.0) || age_v != std::floor(age_v) || age_v > 1e6)
            throw ValidationError(label + ": 'age_years' must be a non-negative integer");

        if (!props.contains("category"))
            throw ValidationError(label + ": missing property 'category'");
        if (!props["category"].is_string())
            throw ValidationError(label + ": 'category' must be a string");
        const auto cat = building_category_from_string(props["category"].get<std::string>());
        if (!cat)
            throw ValidationError(label + ": category must be one of private, public, misc");

        const json& coords = geom.value("coordinates", json());
        if (!coords.is_array() || coords.empty())
            throw ValidationError(label + ": polygon has no rings");
        Ring exterior = ring_from_json(coords[0], label);
        std::vector<Ring> holes;
        for (std::size_t r = 1; r < coords.size(); ++r)
            holes.push_back(ring_from_json(coords[r], label));
        std::optional<Polygon> poly;
        try {
            poly.emplace(std::move(exterior), std::move(holes));
        } catch (const ValidationError& e) {
            throw ValidationError(label + ": " + e.what());
        }

        if (!seen.insert(id).second) throw DuplicateIdError(id);
        out.push_back({id, static_cast<int>(age_v), *cat, std::move(*poly)});
    }
    return out;
}

void write_footprints(std::span<const BuildingAttributes> buildings, const fs::path& path) {
    json features = json::array();
    for (const auto& b : buildings) {
        features.push_back({{"type", "Feature"},
                            {"properties",
                             {{"id", b.id},
                              {"age_years", b.age_years},
                              {"category", std::string(to_string(b.category))}}},
                            {"geometry", polygon_to_json(b.footprint)}});
    }
    json doc = {{"type", "FeatureCollection"}, {"features", features}};
    write_text_file(path, doc.dump(1) + "\n");
}

std::vector<Polyline> read_roads(const fs::path& path) {
    const json doc = read_json(path);
    const json& features = features_of(doc, path);
    std::vector<Polyline> out;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const json& f = features[i];
        const std::string label = "road feature #" + std::to_string(i);
        if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object())
            throw ValidationError(label + ": missing geometry");
        const json& geom = f["geometry"];
        if (geom.value("type", "") != "LineString")
            throw ValidationError(label + ": geometry must be a LineString");
        const json props = f.value("properties", json::object());
        if (!props.is_object() || !props.contains("class") || !props["class"].is_string())
            throw ValidationError(label + ": missing property 'class'");
        const auto cls = road_class_from_string(props["class"].get<std::string>());
        if (!cls) throw ValidationError(label + ": class must be main or minor");
        Ring verts = ring_from_json(geom.value("coordinates", json()), label);
        try {
            out.emplace_back(std::move(verts), *cls);
        } catch (const ValidationError& e) {
            throw ValidationError(label + ": " + e.what());
        }
    }
    return out;
}

void write_roads(std::span<const Polyline> roads, const fs::path& path) {
    json features = json::array();
    for (const auto& r : roads) {
        features.push_back(
            {{"type", "Feature"},
             {"properties", {{"class", std::string(to_string(r.road_class()))}}},
             {"geometry", {{"type", "LineString"}, {"coordinates", ring_to_json(r.vertices())}}}});
    }
    json doc = {{"type", "FeatureCollection"}, {"features", features}};
    write_text_file(path, doc.dump(1) + "\n");
}

// ---------------------------------------------------------------------------
// Samples

std::vector<StationSample> read_samples(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || trim(lines[0]).empty())
        throw ValidationError("'" + path.string() + "' has no header line");
    if (split_csv_line(trim(lines[0])).size() != 3)
        throw ParseError(1, "header must have 3 fields x,y,value");
    if (parse_double(split_csv_line(trim(lines[0]))[0]))
        throw ParseError(1, "expected a header line, found data");
    std::vector<StationSample> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw ParseError(i + 1, "expected 3 fields x,y,value");
        const auto x = parse_double(fields[0]);
        const auto y = parse_double(fields[1]);
        const auto v = parse_double(fields[2]);
        if (!x || !y || !v) throw ParseError(i + 1, "invalid number");
        out.push_back({*x, *y, *v});
    }
    return out;
}

void write_samples(std::span<const StationSample> samples, const fs::path& path) {
    auto out = open_for_write(path);
    out << "x,y,value\n";
    for (const auto& s : samples)
        out << format_roundtrip(s.x) << ',' << format_roundtrip(s.y) << ','
            << format_roundtrip(s.value) << '\n';
    finish_write(out, path);
}

// ---------------------------------------------------------------------------
// ESRI ASCII grid

RasterGrid read_raster_asc(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    static constexpr std::array<std::string_view, 6> keys = {
        "ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"};
    std::array<std::optional<double>, 6> header;
    std::string token;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        std::string key, value;
        if (!(in >> key >> value))
            throw ValidationError("'" + path.string() + "': truncated header");
        const std::string lk = lower(key);
        const auto it = std::find(keys.begin(), keys.end(), lk);
        if (it == keys.end()) {
            for (std::size_t m = 0; m < keys.size(); ++m)
                if (!header[m] && parse_double(key))
                    throw ValidationError("'" + path.string() + "': header keyword '" +
                                          std::string(keys[m]) + "' missing");
            throw ValidationError("'" + path.string() + "': unexpected header keyword '" + key +
                                  "'");
        }
        if (header[static_cast<std::size_t>(it - keys.begin())])
            throw ValidationError("'" + path.string() + "': duplicate header keyword '" + key +
                                  "'");
        const auto v = parse_double(value);
        if (!v)
            throw ValidationError("'" + path.string() + "': invalid value for '" + key + "'");
        header[static_cast<std::size_t>(it - keys.begin())] = v;
    }
    for (std::size_t k = 0; k < keys.size(); ++k)
        if (!header[k])
            throw ValidationError("'" + path.string() + "': header keyword '" +
                                  std::string(keys[k]) + "' missing");

    const double ncols_d = *header[0];
    const double nrows_d = *header[1];
    if (ncols_d != std::floor(ncols_d) || nrows_d != std::floor(nrows_d) || ncols_d < 1 ||
        nrows_d < 1)
        throw ValidationError("'" + path.string() + "': ncols/nrows must be positive integers");
    const auto ncols = static_cast<std::int64_t>(ncols_d);
    const auto nrows = static_cast<std::int64_t>(nrows_d);
    const double nodata = *header[5];

    RasterGrid grid(*header[2], *header[3], *header[4], nrows, ncols, 0.0, nodata);
    const std::int64_t expected = nrows * ncols;
    std::int64_t count = 0;
    while (in >> token) {
        const auto v = parse_double(token);
        if (!v) throw ValidationError("'" + path.string() + "': invalid value '" + token + "'");
        if (count < expected) {
            // File rows run north to south.
            const std::int64_t file_row = count / ncols;
            const std::int64_t col = count % ncols;
            const std::int64_t row = nrows - 1 - file_row;
            if (*v == nodata)
                grid.set_nodata(row, col);
            else
                grid.set(row, col, *v);
        }
        ++count;
    }
    if (count != expected)
        throw ValidationError("'" + path.string() + "': expected " + std::to_string(expected) +
                              " values, found " + std::to_string(count));
    return grid;
}

void write_raster_asc(const RasterGrid& grid, const fs::path& path) {
    auto out = open_for_write(path);
    out << "ncols " << grid.ncols() << '\n'
        << "nrows " << grid.nrows() << '\n'
        << "xllcorner " << format_roundtrip(grid.origin_x()) << '\n'
        << "yllcorner " << format_roundtrip(grid.origin_y()) << '\n'
        << "cellsize " << format_roundtrip(grid.cell()) << '\n'
        << "NODATA_value " << format_roundtrip(grid.nodata_value()) << '\n';
    const std::string nodata = format_roundtrip(grid.nodata_value());
    for (std::int64_t r = grid.nrows() - 1; r >= 0; --r) {
        for (std::int64_t c = 0; c < grid.ncols(); ++c) {
            if (c > 0) out << ' ';
            out << (grid.is_nodata(r, c) ? nodata : format_roundtrip(grid.at(r, c)));
        }
        out << '\n';
    }
    finish_write(out, path);
}

// ---------------------------------------------------------------------------
// Building report

namespace {

std::string opt_fixed(const std::optional<double>& v) { return v ? format_fixed(*v) : ""; }

} // namespace

void write_building_report_csv(std::span<const BuildingReportRow> rows, const fs::path& csv_path) {
    auto out = open_for_write(csv_path);
    out << building_report_header << '\n';
    for (const auto& r : rows) {
        out << r.id << ',' << (r.potential ? 1 : 0) << ',' << format_fixed(r.roof_area_m2) << ','
            << format_fixed(r.greenable_area_m2) << ',' << format_fixed(r.slope_deg) << ','
            << format_fixed(r.height_m);
        for (std::size_t k = 0; k < IndicatorVector::size; ++k) {
            out << ',';
            if (r.indicators) out << format_fixed(r.indicators->as_array()[k]);
        }
        out << ',' << opt_fixed(r.priority) << ',';
        if (r.rank) out << *r.rank;
        out << '\n';
    }
    finish_write(out, csv_path);
}

void write_building_report(std::span<const BuildingReportRow> rows,
                           std::span<const BuildingAttributes> footprints, const fs::path& csv_path,
                           const fs::path& geojson_path) {
    json features = json::array();
    for (const auto& r : rows) {
        const auto it = std::find_if(footprints.begin(), footprints.end(),
                                     [&](const BuildingAttributes& b) { return b.id == r.id; });
        if (it == footprints.end())
            throw ValidationError("no footprint for building '" + r.id + "'");
        json props = {{"id", r.id},
                      {"potential", r.potential},
                      {"roof_area_m2", rounded6(r.roof_area_m2)},
                      {"greenable_area_m2", rounded6(r.greenable_area_m2)},
                      {"slope_deg", rounded6(r.slope_deg)},
                      {"height_m", rounded6(r.height_m)}};
        for (std::size_t k = 0; k < IndicatorVector::size; ++k) {
            const std::string key(IndicatorVector::names[k]);
            props[key] = r.indicators ? json(rounded6(r.indicators->as_array()[k])) : json(nullptr);
        }
        props["priority"] = r.priority ? json(rounded6(*r.priority)) : json(nullptr);
        props["rank"] = r.rank ? json(*r.rank) : json(nullptr);
        features.push_back({{"type", "Feature"},
                            {"properties", props},
                            {"geometry", polygon_to_json(it->footprint)}});
    }
    write_building_report_csv(rows, csv_path);
    json doc = {{"type", "FeatureCollection"}, {"features", features}};
    write_text_file(geojson_path, doc.dump(1) + "\n");
}

std::vector<BuildingReportRow> read_building_report_csv(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || trim(lines[0]) != building_report_header)
        throw ValidationError("'" + path.string() + "' is not a building report");
    std::vector<BuildingReportRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = trim(lines[i]);
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 14) throw ParseError(lineno, "expected 14 fields");
        BuildingReportRow r;
        r.id = std::string(trim(f[0]));
        if (r.id.empty()) throw ParseError(lineno, "empty id");
        const auto pot = trim(f[1]);
        if (pot != "0" && pot != "1") throw ParseError(lineno, "potential must be 0 or 1");
        r.potential = pot == "1";
        auto req = [&](std::size_t k) {
            const auto v = parse_double(f[k]);
            if (!v) throw ParseError(lineno, "invalid number in column " + std::to_string(k + 1));
            return *v;
        };
        r.roof_area_m2 = req(2);
        r.greenable_area_m2 = req(3);
        r.slope_deg = req(4);
        r.height_m = req(5);
        std::size_t present = 0;
        for (std::size_t k = 6; k < 12; ++k) present += trim(f[k]).empty() ? 0 : 1;
        if (present != 0 && present != 6)
            throw ParseError(lineno, "indicator columns must be all present or all empty");
        if (present == 6) {
            std::array<double, 6> a{};
            for (std::size_t k = 0; k < 6; ++k) a[k] = req(6 + k);
            r.indicators = IndicatorVector::from_array(a);
        }
        if (!trim(f[12]).empty()) r.priority = req(12);
        if (!trim(f[13]).empty()) {
            const auto rf = trim(f[13]);
            std::int64_t rank = 0;
            const auto [ptr, ec] = std::from_chars(rf.data(), rf.data() + rf.size(), rank);
            if (ec != std::errc() || ptr != rf.data() + rf.size())
                throw ParseError(lineno, "invalid rank");
            r.rank = rank;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace greenprior
