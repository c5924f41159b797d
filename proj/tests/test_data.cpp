#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "casreg/data.hpp"
#include "casreg/errors.hpp"
#include "test_support.hpp"

using namespace casreg;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/casreg_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& content) const {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
};

bool samples_equal(const Sample& a, const Sample& b) {
    return a.id == b.id && a.patient_id == b.patient_id && a.y == b.y && a.e == b.e && a.s == b.s &&
           a.features == b.features;
}

} // namespace

TEST_CASE("load_csv: well-formed file") {
    TempFile f("ok.csv");
    f.write("id,patient_id,y,e,f0,f1\n"
            "s1,p1,100.5,0,0.25,-1.5\n"
            "s2,p1,100.5,0,0.3,2.25\n"
            "s3,p2,40,1,1,0\n");
    const Dataset ds = load_csv(f.path);
    CHECK(ds.samples.size() == 3);
    CHECK(ds.feature_dim == 2);
    CHECK(ds.samples[0].y == 100.5);
    CHECK(ds.samples[2].e == 1);
    CHECK(ds.samples[1].features == std::vector<double>{0.3, 2.25});
    CHECK(ds.n_censored() == 1);
    CHECK(ds.patient_ids() == std::vector<std::string>{"p1", "p2"});
}

TEST_CASE("load_csv: each malformation gets its own diagnostic") {
    TempFile f("bad.csv");

    f.write("id,patient_id,y\ns1,p1,10\n");
    CHECK_THROWS_WITH_AS(load_csv(f.path), doctest::Contains("header"), ParseError);

    f.write("id,patient_id,y,e,f0\ns1,p1,10,2,0.5\n");
    CHECK_THROWS_WITH_AS(load_csv(f.path), doctest::Contains("row 2"), ParseError);

    f.write("id,patient_id,y,e,f0\ns1,p1,-3,0,0.5\n");
    CHECK_THROWS_AS(load_csv(f.path), ParseError);

    f.write("id,patient_id,y,e,f0\ns1,p1,10,0,abc\n");
    CHECK_THROWS_WITH_AS(load_csv(f.path), doctest::Contains("f0"), ParseError);

    f.write("id,patient_id,y,e,f0\ns1,p1,10,0,0.5\ns1,p2,11,0,0.5\n");
    CHECK_THROWS_WITH_AS(load_csv(f.path), doctest::Contains("duplicate"), DataError);

    f.write("id,patient_id,y,e,f0\ns1,p1,10,0,0.5\ns2,p1,11,0,0.5\n");
    CHECK_THROWS_WITH_AS(load_csv(f.path), doctest::Contains("inconsistent"), DataError);

    CHECK_THROWS_AS(load_csv("/tmp/casreg_no_such_file.csv"), IoError);
}

TEST_CASE("save_csv / load_csv round trip") {
    SynthSpec spec;
    spec.n_patients = 40;
    spec.samples_per_patient = 2;
    spec.censor_prob = 0.4;
    spec.seed = 5;
    const Dataset ds = generate_synthetic(spec);

    TempFile f("roundtrip.csv");
    save_csv(ds, f.path);
    const Dataset back = load_csv(f.path);
    REQUIRE(back.samples.size() == ds.samples.size());
    CHECK(back.feature_dim == ds.feature_dim);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        CHECK(samples_equal(back.samples[i], ds.samples[i]));
    }
}

TEST_CASE("generate_synthetic: censoring fraction tracks the probability") {
    SynthSpec spec;
    spec.n_patients = 10000;
    spec.censor_prob = 0.5;
    spec.seed = 11;
    const Dataset ds = generate_synthetic(spec);
    const double fraction = static_cast<double>(ds.n_censored()) / static_cast<double>(ds.samples.size());
    CHECK(fraction > 0.48);
    CHECK(fraction < 0.52);

    SynthSpec none = spec;
    none.n_patients = 500;
    none.censor_prob = 0.0;
    CHECK(generate_synthetic(none).n_censored() == 0);
}

TEST_CASE("generate_synthetic: times live in [1, t_max], censored strictly below the event") {
    SynthSpec spec;
    spec.n_patients = 2000;
    spec.censor_prob = 0.5;
    spec.seed = 3;
    const Dataset ds = generate_synthetic(spec);
    for (const auto& s : ds.samples) {
        CHECK(s.y >= 1.0);
        CHECK(s.y <= spec.t_max);
    }
}

TEST_CASE("generate_synthetic: zero noise duplicates features within a patient") {
    SynthSpec spec;
    spec.n_patients = 30;
    spec.samples_per_patient = 2;
    spec.noise = 0.0;
    spec.seed = 17;
    const Dataset ds = generate_synthetic(spec);
    for (std::size_t i = 0; i + 1 < ds.samples.size(); i += 2) {
        CHECK(ds.samples[i].patient_id == ds.samples[i + 1].patient_id);
        CHECK(ds.samples[i].features == ds.samples[i + 1].features);
    }
}

TEST_CASE("generate_synthetic: risk orders time (Spearman on 10k patients)") {
    SynthSpec spec;
    spec.n_patients = 10000;
    spec.noise = 0.0;
    spec.censor_prob = 0.0;
    spec.seed = 29;
    SynthDebug debug;
    generate_synthetic(spec, &debug);
    const double rho = testsupport::spearman(debug.patient_risk, debug.patient_time);
    CHECK(rho < -0.9);
}

TEST_CASE("generate_synthetic: deterministic from the seed") {
    SynthSpec spec;
    spec.n_patients = 50;
    spec.seed = 101;
    const Dataset a = generate_synthetic(spec);
    const Dataset b = generate_synthetic(spec);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(samples_equal(a.samples[i], b.samples[i]));
    }
}

TEST_CASE("simulate_censoring: rho endpoints") {
    SynthSpec spec;
    spec.n_patients = 200;
    spec.censor_prob = 0.25;
    spec.seed = 7;
    const Dataset ds = generate_synthetic(spec);

    const Dataset same = simulate_censoring(ds, 0.0, 42);
    REQUIRE(same.samples.size() == ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        CHECK(samples_equal(same.samples[i], ds.samples[i]));
    }

    const Dataset all = simulate_censoring(ds, 1.0, 42);
    CHECK(all.n_uncensored() == 0);
}

TEST_CASE("simulate_censoring: exact count, strict reduction, untouched rest") {
    SynthSpec spec;
    spec.n_patients = 100;
    spec.censor_prob = 0.0; // 100 uncensored patients
    spec.seed = 13;
    const Dataset ds = generate_synthetic(spec);

    const Dataset out = simulate_censoring(ds, 0.5, 99);
    long long transformed = 0;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const Sample& before = ds.samples[i];
        const Sample& after = out.samples[i];
        if (after.e == 1) {
            ++transformed;
            CHECK(after.y < before.y);
            CHECK(after.y > 0.0);
        } else {
            CHECK(samples_equal(before, after));
        }
    }
    CHECK(transformed == 50);

    // Original untouched, rerun identical.
    CHECK(ds.n_censored() == 0);
    const Dataset again = simulate_censoring(ds, 0.5, 99);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        CHECK(samples_equal(out.samples[i], again.samples[i]));
    }
}

TEST_CASE("simulate_censoring: never raises y, never drops the censored count") {
    SynthSpec spec;
    spec.n_patients = 300;
    spec.censor_prob = 0.3;
    spec.seed = 23;
    const Dataset ds = generate_synthetic(spec);
    for (double rho : {0.1, 0.4, 0.8}) {
        const Dataset out = simulate_censoring(ds, rho, 5);
        CHECK(out.n_censored() >= ds.n_censored());
        for (std::size_t i = 0; i < ds.samples.size(); ++i) {
            CHECK(out.samples[i].y <= ds.samples[i].y);
        }
    }
    CHECK_THROWS_AS(simulate_censoring(ds, 1.5, 5), InvalidArgument);
}

TEST_CASE("split_patient_wise: partitions patients exactly") {
    SynthSpec spec;
    spec.n_patients = 97;
    spec.samples_per_patient = 3;
    spec.seed = 31;
    const Dataset ds = generate_synthetic(spec);

    const auto parts = split_patient_wise(ds, {0.7, 0.15, 0.15}, 8);
    std::set<std::string> seen;
    std::size_t total_samples = 0;
    for (const auto& part : parts) {
        total_samples += part.samples.size();
        for (const auto& pid : part.patient_ids()) {
            CHECK(seen.insert(pid).second); // no patient in two parts
        }
    }
    CHECK(total_samples == ds.samples.size());
    CHECK(seen.size() == 97);

    // Sizes within one patient of the targets.
    CHECK(std::abs(static_cast<double>(parts[0].patient_ids().size()) - 0.7 * 97.0) <= 1.0);
    CHECK(std::abs(static_cast<double>(parts[1].patient_ids().size()) - 0.15 * 97.0) <= 1.0);
    CHECK(std::abs(static_cast<double>(parts[2].patient_ids().size()) - 0.15 * 97.0) <= 1.0);
}

TEST_CASE("split_patient_wise: three patients, one per split") {
    SynthSpec spec;
    spec.n_patients = 3;
    spec.seed = 41;
    const Dataset ds = generate_synthetic(spec);
    const auto parts = split_patient_wise(ds, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 2);
    for (const auto& part : parts) {
        CHECK(part.patient_ids().size() == 1);
    }
}

TEST_CASE("split_patient_wise: determinism and error paths") {
    SynthSpec spec;
    spec.n_patients = 40;
    spec.seed = 43;
    const Dataset ds = generate_synthetic(spec);
    const auto a = split_patient_wise(ds, {0.5, 0.25, 0.25}, 77);
    const auto b = split_patient_wise(ds, {0.5, 0.25, 0.25}, 77);
    for (int p = 0; p < 3; ++p) {
        REQUIRE(a[p].samples.size() == b[p].samples.size());
        for (std::size_t i = 0; i < a[p].samples.size(); ++i) {
            CHECK(samples_equal(a[p].samples[i], b[p].samples[i]));
        }
    }

    SynthSpec tiny;
    tiny.n_patients = 2;
    const Dataset small = generate_synthetic(tiny);
    CHECK_THROWS_AS(split_patient_wise(small, {0.4, 0.3, 0.3}, 1), InvalidArgument);
    CHECK_THROWS_AS(split_patient_wise(ds, {0.5, 0.5, 0.5}, 1), InvalidArgument);
    CHECK_THROWS_AS(split_patient_wise(ds, {1.0, -0.5, 0.5}, 1), InvalidArgument);
}
