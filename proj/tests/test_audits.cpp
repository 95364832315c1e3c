#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "stark/audits.hpp"
#include "stark/errors.hpp"

using namespace stark;

TEST_CASE("lambert constant inverts K w exp(K w)") {
    for (double w : {0.01, 0.3, 2.0})
        for (double r : {1e-6, 0.5, 40.0}) {
            const double k = lambert_constant(r, w);
            CHECK(k * w * std::exp(k * w) == doctest::Approx(r * w).epsilon(1e-12));
        }
    CHECK(lambert_constant(0.0, 0.0) == 0.0);
    CHECK(std::isinf(lambert_constant(1.0, 0.0)));
}

TEST_CASE("denominator ratio") {
    const double scale = std::cbrt(1.5 * M_PI * 8.0);
    CHECK(denominator_ratio(8, scale) == doctest::Approx(0.0));
    CHECK(denominator_ratio(8, 1.1 * scale) == doctest::Approx(0.2));
}

TEST_CASE("baselines round trip and the environment override") {
    const auto dir = std::filesystem::temp_directory_path() / "stark_baselines_test";
    std::filesystem::remove_all(dir);
    const auto path = (dir / "nested" / "b.json").string();
    Baselines b;
    b.set("x.one", 1.25);
    b.set("x.two", 3.0);
    b.save(path);
    const auto back = Baselines::load(path);
    CHECK(back.values() == b.values());
    CHECK(Baselines::load((dir / "missing.json").string()).empty());

    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(Baselines::load((dir / "bad.json").string()), InputError);

    setenv("STARK_SPECTRA_BASELINES", path.c_str(), 1);
    CHECK(baselines_path() == path);
    unsetenv("STARK_SPECTRA_BASELINES");
    CHECK(baselines_path() != path);
    std::filesystem::remove_all(dir);
}

TEST_CASE("freeze and compare") {
    std::vector<AuditResult> r{{"a", "", 1.0, std::nullopt, false, 3}, {"b", "", 2.0, std::nullopt, false, 3}};
    const Baselines frozen = freeze(r);
    CHECK(*frozen.get("a") == doctest::Approx(kBaselineHeadroom));
    compare_with_baselines(r, frozen);
    CHECK(r[0].passed);
    CHECK(r[1].passed);

    Baselines partial;
    partial.set("a", 0.5);
    compare_with_baselines(r, partial);
    CHECK_FALSE(r[0].passed);
    CHECK_FALSE(r[1].passed);
    CHECK_FALSE(r[1].baseline.has_value());
}

TEST_CASE("coarse basis audit is finite and below the checked-in baselines' order of magnitude") {
    AuditOptions coarse;
    coarse.basis_z_points = 15;
    coarse.basis_x_points = 30;
    const auto res = audit_basis(coarse);
    CHECK(res.size() == 8);
    const auto frozen = Baselines::load(baselines_path());
    for (const auto& r : res) {
        CAPTURE(r.name);
        CHECK(std::isfinite(r.measured));
        CHECK(r.samples == 15 * 30);
        if (auto v = frozen.get(r.name)) CHECK(r.measured <= 2.0 * *v);
    }
}

TEST_CASE("builtin potentials") {
    const auto all = builtin_potentials();
    CHECK(all.size() == 5);
    for (const auto& [name, q] : all) CHECK_FALSE(q.is_zero());
}
