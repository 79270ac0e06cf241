#include "greenprior/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "greenprior/errors.hpp"
#include "greenprior/ingest.hpp"

namespace greenprior {

namespace {

// std distributions are implementation-defined; these draws are not, so a
// seed yields the same city with every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) {
        const int v = lo + static_cast<int>(std::floor(uniform() * (hi - lo + 1)));
        return std::min(v, hi);
    }
    // Irwin-Hall approximation of a standard normal draw.
    double normal() {
        double s = 0.0;
        for (int i = 0; i < 12; ++i) s += uniform();
        return s - 6.0;
    }

private:
    std::mt19937_64 engine_;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

double ground_z(double x, double y) { return round_to(2.0 + 0.004 * x + 0.002 * y, 0.001); }

struct Lot {
    double x = 0.0;
    double y = 0.0;
    bool park = false;
    std::optional<BoundingBox> footprint;
};

struct RoofShape {
    RoofType type = RoofType::flat;
    double base_z = 0.0;    // eave elevation
    double pitch_deg = 0.0;
    bool along_x = true;    // shed: rises with x; gabled: ridge parallel to x
    BoundingBox box;

    double z(double x, double y) const {
        const double t = std::tan(pitch_deg * std::numbers::pi / 180.0);
        switch (type) {
        case RoofType::flat:
        case RoofType::small: return base_z;
        case RoofType::shed: return base_z + t * (along_x ? x - box.min_x : y - box.min_y);
        case RoofType::gabled:
            if (along_x) {
                const double half = (box.max_y - box.min_y) / 2.0;
                return base_z + t * (half - std::abs(y - (box.min_y + half)));
            } else {
                const double half = (box.max_x - box.min_x) / 2.0;
                return base_z + t * (half - std::abs(x - (box.min_x + half)));
            }
        }
        return base_z;
    }
};

RoofType pick_type(std::size_t index, Rng& rng) {
    // The first few buildings pin down one of each kind.
    switch (index) {
    case 0:
    case 1: return RoofType::flat;
    case 2: return RoofType::small;
    case 3: return RoofType::gabled;
    case 4: return RoofType::shed;
    default: break;
    }
    const double u = rng.uniform();
    if (u < 0.45) return RoofType::flat;
    if (u < 0.6) return RoofType::shed;
    if (u < 0.85) return RoofType::gabled;
    return RoofType::small;
}

int pick_age(std::size_t index, double old_share, Rng& rng) {
    if (index == 0) return 60; // oldest age that still qualifies
    if (index == 1) return 61; // youngest age that does not
    if (rng.uniform() < old_share) return rng.integer(61, 95);
    return rng.integer(1, 60);
}

BuildingCategory pick_category(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.5) return BuildingCategory::private_owned;
    if (u < 0.75) return BuildingCategory::miscellaneous;
    return BuildingCategory::public_owned;
}

void add_roof_and_walls(const RoofShape& roof, double ground, PointCloud& pc) {
    const BoundingBox& b = roof.box;
    const auto nx = static_cast<int>(std::lround(b.max_x - b.min_x));
    const auto ny = static_cast<int>(std::lround(b.max_y - b.min_y));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double x = b.min_x + 0.5 + i;
            const double y = b.min_y + 0.5 + j;
            pc.push_back({x, y, round_to(roof.z(x, y), 0.001), PointClass::building});
        }

    // Wall points 0.1 m inside the outline, at least 0.5 m below the roof.
    auto wall = [&](double x, double y) {
        const double top = roof.z(x, y) - 0.5;
        for (double z = ground + 0.5; z < top; z += 1.0)
            pc.push_back({x, y, round_to(z, 0.001), PointClass::building});
    };
    for (double t = b.min_x + 0.5; t < b.max_x; t += 1.0) {
        wall(t, b.min_y + 0.1);
        wall(t, b.max_y - 0.1);
    }
    for (double t = b.min_y + 0.5; t < b.max_y; t += 1.0) {
        wall(b.min_x + 0.1, t);
        wall(b.max_x - 0.1, t);
    }
}

bool near_box(const BoundingBox& b, double x, double y, double buffer) {
    return x >= b.min_x - buffer && x <= b.max_x + buffer && y >= b.min_y - buffer &&
           y <= b.max_y + buffer;
}

} // namespace

std::string_view to_string(RoofType t) noexcept {
    switch (t) {
    case RoofType::flat: return "flat";
    case RoofType::shed: return "shed";
    case RoofType::gabled: return "gabled";
    case RoofType::small: return "small";
    }
    return "flat";
}

SyntheticCity generate_city(const SyntheticCitySpec& spec) {
    if (spec.min_side_m < 8 || spec.max_side_m < spec.min_side_m)
        throw ValidationError("building sides must satisfy 8 <= min <= max");
    if (spec.lot_pitch_m < spec.max_side_m + 6)
        throw ValidationError("lot pitch must leave at least 3 m around every building");

    Rng rng(spec.seed);
    SyntheticCity city;
    const std::size_t n = spec.buildings;
    const double pitch = spec.lot_pitch_m;
    const double margin = 20.0;
    const auto cols = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n + 1)))));
    const std::size_t rows = (n + 1 + cols - 1) / cols; // at least one park lot
    const double width = 2.0 * margin + static_cast<double>(cols) * pitch;
    const double height = 2.0 * margin + static_cast<double>(rows) * pitch;

    std::vector<Lot> lots(rows * cols);
    for (std::size_t k = 0; k < lots.size(); ++k) {
        lots[k].x = margin + static_cast<double>(k % cols) * pitch;
        lots[k].y = margin + static_cast<double>(k / cols) * pitch;
        lots[k].park = k >= n;
    }

    const int digits = n >= 1000 ? static_cast<int>(std::to_string(n).size()) : 3;
    for (std::size_t k = 0; k < n; ++k) {
        Lot& lot = lots[k];
        const RoofType type = pick_type(k, rng);
        int w = 0, h = 0;
        RoofShape roof;
        roof.type = type;
        switch (type) {
        case RoofType::small:
            w = rng.integer(2, 3);
            h = rng.integer(2, 3);
            break;
        case RoofType::gabled: {
            // Odd width puts the ridge on a row of cell centers.
            const int across = 2 * rng.integer(spec.min_side_m / 2, std::min(10, (spec.max_side_m - 1) / 2)) + 1;
            const int along = rng.integer(across, spec.max_side_m);
            roof.along_x = rng.uniform() < 0.5;
            w = roof.along_x ? along : across;
            h = roof.along_x ? across : along;
            roof.pitch_deg = round_to(rng.uniform(20.0, 30.0), 0.1);
            break;
        }
        case RoofType::shed:
            w = rng.integer(spec.min_side_m, spec.max_side_m);
            h = rng.integer(spec.min_side_m, spec.max_side_m);
            roof.along_x = rng.uniform() < 0.5;
            roof.pitch_deg = round_to(rng.uniform(3.0, 10.0), 0.1);
            break;
        case RoofType::flat:
            w = rng.integer(spec.min_side_m, spec.max_side_m);
            h = rng.integer(spec.min_side_m, spec.max_side_m);
            break;
        }
        const int max_off_x = static_cast<int>(pitch) - w - 3;
        const int max_off_y = static_cast<int>(pitch) - h - 3;
        const double fx = lot.x + rng.integer(3, max_off_x);
        const double fy = lot.y + rng.integer(3, max_off_y);
        roof.box = {fx, fy, fx + w, fy + h};
        lot.footprint = roof.box;

        const double ground = ground_z(fx + w / 2.0, fy + h / 2.0);
        const double storeys = type == RoofType::small ? rng.uniform(3.0, 6.0)
                               : type == RoofType::flat ? rng.uniform(6.0, 60.0)
                                                        : rng.uniform(6.0, 24.0);
        roof.base_z = round_to(ground + storeys, 0.1);
        add_roof_and_walls(roof, ground, city.points);

        std::ostringstream id;
        id << 'b' << std::string(static_cast<std::size_t>(std::max<int>(
                                     0, digits - static_cast<int>(std::to_string(k + 1).size()))),
                                 '0')
           << (k + 1);
        const int age = pick_age(k, spec.old_share, rng);
        const BuildingCategory category = pick_category(rng);
        city.buildings.push_back({id.str(), age, category, Polygon::rectangle(fx, fy, fx + w, fy + h)});

        GroundTruthRow truth;
        truth.id = id.str();
        truth.roof_type = type;
        truth.pitch_deg = roof.pitch_deg;
        truth.footprint_area_m2 = static_cast<double>(w * h);
        truth.age_years = age;
        truth.category = category;
        const bool flat_enough = type == RoofType::flat || type == RoofType::shed;
        truth.potential = flat_enough && age <= 60;
        truth.greenable_area_m2 = truth.potential ? truth.footprint_area_m2 : 0.0;
        city.truth.push_back(std::move(truth));
    }

    // Bare ground on a regular lattice, leaving out building footprints.
    const double gs = spec.ground_spacing_m;
    for (double y = gs / 2.0; y < height; y += gs)
        for (double x = gs / 2.0; x < width; x += gs) {
            bool covered = false;
            for (const auto& lot : lots)
                if (lot.footprint && near_box(*lot.footprint, x, y, 0.5)) {
                    covered = true;
                    break;
                }
            if (!covered) city.points.push_back({x, y, ground_z(x, y), PointClass::ground});
        }

    // Parks fill empty lots; built lots get an occasional tree patch.
    const double vs = spec.vegetation_spacing_m;
    for (const auto& lot : lots) {
        if (lot.park) {
            for (double y = lot.y + 2.0 + vs / 2.0; y < lot.y + pitch - 2.0; y += vs)
                for (double x = lot.x + 2.0 + vs / 2.0; x < lot.x + pitch - 2.0; x += vs)
                    city.points.push_back({x, y, round_to(ground_z(x, y) + rng.uniform(2.0, 10.0), 0.001),
                                           PointClass::vegetation});
            continue;
        }
        if (rng.uniform() >= 0.6) continue;
        const double cx = lot.x + rng.uniform(4.0, pitch - 4.0);
        const double cy = lot.y + rng.uniform(4.0, pitch - 4.0);
        const double radius = rng.uniform(3.0, 8.0);
        for (double y = lot.y + vs / 2.0; y < lot.y + pitch; y += vs)
            for (double x = lot.x + vs / 2.0; x < lot.x + pitch; x += vs) {
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) > radius * radius) continue;
                if (near_box(*lot.footprint, x, y, 2.0)) continue;
                city.points.push_back({x, y, round_to(ground_z(x, y) + rng.uniform(2.0, 8.0), 0.001),
                                       PointClass::vegetation});
            }
    }

    // Street grid on the lot boundaries; every third east-west street and
    // every fourth north-south street is a main road.
    for (std::size_t r = 0; r <= rows; ++r) {
        const double y = margin + static_cast<double>(r) * pitch;
        city.roads.emplace_back(std::vector<Point2>{{0.0, y}, {width, y}},
                                r % 3 == 0 ? RoadClass::main : RoadClass::minor);
    }
    for (std::size_t c = 0; c <= cols; ++c) {
        const double x = margin + static_cast<double>(c) * pitch;
        city.roads.emplace_back(std::vector<Point2>{{x, 0.0}, {x, height}},
                                c % 4 == 0 ? RoadClass::main : RoadClass::minor);
    }
    // Vehicles on the east-west streets.
    for (std::size_t r = 0; r <= rows; ++r)
        for (int i = 0; i < 3 * static_cast<int>(cols); ++i) {
            const double x = round_to(rng.uniform(1.0, width - 1.0), 0.01);
            const double y = margin + static_cast<double>(r) * pitch + round_to(rng.uniform(-1.5, 1.5), 0.01);
            city.points.push_back({x, y, round_to(ground_z(x, y) + 1.5, 0.001), PointClass::other});
        }

    for (std::size_t i = 0; i < spec.precipitation_stations; ++i) {
        const double x = round_to(rng.uniform(0.0, width), 0.1);
        const double y = round_to(rng.uniform(0.0, height), 0.1);
        const double v = 2200.0 + 0.6 * (x - width / 2.0) - 0.4 * (y - height / 2.0) + 25.0 * rng.normal();
        city.precipitation.push_back({x, y, round_to(v, 0.1)});
    }
    for (std::size_t i = 0; i < spec.income_points; ++i) {
        const double x = round_to(rng.uniform(0.0, width), 0.1);
        const double y = round_to(rng.uniform(0.0, height), 0.1);
        const double v = 26000.0 + 40.0 * (y - height / 2.0) - 15.0 * (x - width / 2.0) + 3000.0 * rng.normal();
        city.income.push_back({x, y, std::max(8000.0, std::round(v))});
    }
    const double ps = spec.population_spacing_m;
    for (double y = ps / 2.0; y < height; y += ps)
        for (double x = ps / 2.0; x < width; x += ps) {
            bool in_park = false;
            for (const auto& lot : lots)
                if (lot.park && x >= lot.x && x < lot.x + pitch && y >= lot.y && y < lot.y + pitch)
                    in_park = true;
            const double pop = in_park ? 0.0 : std::round(rng.uniform(20.0, 400.0));
            city.population.push_back({x, y, pop});
        }

    const double tc = spec.temperature_cell_m;
    const auto t_cols = static_cast<std::int64_t>(std::ceil(width / tc));
    const auto t_rows = static_cast<std::int64_t>(std::ceil(height / tc));
    const std::array<double, 4> season_base = {25.0, 33.0, 30.0, 18.0};
    for (std::size_t s = 0; s < 4; ++s) {
        RasterGrid g(0.0, 0.0, tc, t_rows, t_cols);
        for (std::int64_t r = 0; r < t_rows; ++r)
            for (std::int64_t c = 0; c < t_cols; ++c) {
                const Point2 p = cell_center(g, r, c);
                const double v = season_base[s] + 1.5 * std::sin(p.x / 80.0) * std::cos(p.y / 90.0) +
                                 0.004 * p.x - 0.003 * p.y + 0.3 * rng.normal();
                g.set(r, c, round_to(v, 0.01));
            }
        // Cloud gaps: a 2x2 block and one isolated cell.
        if (t_rows >= 4 && t_cols >= 4) {
            const auto r0 = static_cast<std::int64_t>(rng.integer(1, static_cast<int>(t_rows) - 3));
            const auto c0 = static_cast<std::int64_t>(rng.integer(1, static_cast<int>(t_cols) - 3));
            for (std::int64_t dr = 0; dr < 2; ++dr)
                for (std::int64_t dc = 0; dc < 2; ++dc) g.set_nodata(r0 + dr, c0 + dc);
            g.set_nodata(static_cast<std::int64_t>(rng.integer(0, static_cast<int>(t_rows) - 1)),
                         static_cast<std::int64_t>(rng.integer(0, static_cast<int>(t_cols) - 1)));
        }
        city.temperature[s] = std::move(g);
    }
    return city;
}

void write_city(const SyntheticCity& city, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    write_point_cloud(city.points, dir / "points.csv");
    write_footprints(city.buildings, dir / "footprints.geojson");
    write_roads(city.roads, dir / "roads.geojson");
    write_samples(city.precipitation, dir / "precipitation.csv");
    write_samples(city.income, dir / "income.csv");
    write_samples(city.population, dir / "population.csv");
    const std::array<const char*, 4> seasons = {"spring", "summer", "autumn", "winter"};
    for (std::size_t s = 0; s < 4; ++s)
        write_raster_asc(city.temperature[s], dir / (std::string("temp_") + seasons[s] + ".asc"));

    std::string truth = "id,roof_type,pitch_deg,footprint_area_m2,greenable_area_m2,age_years,category,potential\n";
    for (const auto& t : city.truth) {
        truth += t.id + ',' + std::string(to_string(t.roof_type)) + ',' + format_fixed(t.pitch_deg) +
                 ',' + format_fixed(t.footprint_area_m2) + ',' + format_fixed(t.greenable_area_m2) +
                 ',' + std::to_string(t.age_years) + ',' + std::string(to_string(t.category)) + ',' +
                 (t.potential ? "1" : "0") + '\n';
    }
    write_text_file(dir / "ground_truth.csv", truth);

    std::string cfg = "# synthetic city inputs; paths are relative to this file\n";
    cfg += "points = points.csv\nfootprints = footprints.geojson\nroads = roads.geojson\n";
    cfg += "precipitation = precipitation.csv\nincome = income.csv\npopulation = population.csv\n";
    for (const char* s : seasons) cfg += std::string("temp_") + s + " = temp_" + s + ".asc\n";
    cfg += "out = out\n";
    // The city spans a few hundred metres; a city-scale radius would make
    // coverage identical for every building.
    cfg += "gc_radius = 60\n";
    write_text_file(dir / std::string(synthetic_config_name), cfg);
}

std::vector<GroundTruthRow> read_ground_truth(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<GroundTruthRow> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
        GroundTruthRow r;
        r.id = std::string(f[0]);
        if (f[1] == "flat") r.roof_type = RoofType::flat;
        else if (f[1] == "shed") r.roof_type = RoofType::shed;
        else if (f[1] == "gabled") r.roof_type = RoofType::gabled;
        else if (f[1] == "small") r.roof_type = RoofType::small;
        else throw ParseError(line_no, "unknown roof type");
        const auto pitch = parse_double(f[2]);
        const auto area = parse_double(f[3]);
        const auto green = parse_double(f[4]);
        const auto age = parse_double(f[5]);
        const auto cat = building_category_from_string(f[6]);
        if (!pitch || !area || !green || !age || !cat || (f[7] != "0" && f[7] != "1"))
            throw ParseError(line_no, "malformed ground truth row");
        r.pitch_deg = *pitch;
        r.footprint_area_m2 = *area;
        r.greenable_area_m2 = *green;
        r.age_years = static_cast<int>(*age);
        r.category = *cat;
        r.potential = f[7] == "1";
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace greenprior
