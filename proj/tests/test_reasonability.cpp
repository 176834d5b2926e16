#include <catch2/catch.hpp>

#include "mipsym/mps.hpp"
#include "mipsym/reasonability.hpp"
#include "oracle.hpp"

using namespace mipsym;

namespace {

MipInstance knapsack() { return parse_mps_string(oracle::knapsack_mps()); }

}  // namespace

TEST_CASE("variable signatures on the knapsack") {
    auto mip = knapsack();
    SignatureConfig cfg;
    SECTION("interchangeable items share a signature") {
        CHECK(variable_signature(mip, 0, cfg) == variable_signature(mip, 1, cfg));
        CHECK(variable_signature(mip, 3, cfg) == variable_signature(mip, 4, cfg));
    }
    SECTION("different objective coefficients separate") {
        CHECK(variable_signature(mip, 0, cfg) != variable_signature(mip, 3, cfg));
    }
    SECTION("different column values separate x1 from x3") {
        CHECK(variable_signature(mip, 0, cfg) != variable_signature(mip, 2, cfg));
        SignatureConfig no_profile = cfg;
        no_profile.use_value_profile = false;
        CHECK(variable_signature(mip, 0, no_profile) == variable_signature(mip, 2, no_profile));
    }
}

TEST_CASE("bounds flag semantics") {
    const char* text =
        "NAME B\n"
        "ROWS\n"
        " N  OBJ\n"
        " L  R1\n"
        "COLUMNS\n"
        "    A  OBJ  1  R1  1\n"
        "    B  OBJ  1  R1  1\n"
        "RHS\n"
        "    RHS  R1  2\n"
        "BOUNDS\n"
        " UP  BND  B  7\n"
        "ENDATA\n";
    auto mip = parse_mps_string(text);
    SignatureConfig with_bounds, without_bounds;
    without_bounds.use_bounds = false;
    CHECK(variable_signature(mip, 0, with_bounds) != variable_signature(mip, 1, with_bounds));
    CHECK(variable_signature(mip, 0, without_bounds) == variable_signature(mip, 1, without_bounds));
}

TEST_CASE("constraint signatures") {
    const char* text =
        "NAME C\n"
        "ROWS\n"
        " N  OBJ\n"
        " L  R1\n"
        " L  R2\n"
        " L  R3\n"
        " E  R4\n"
        "COLUMNS\n"
        "    X  R1  1  R2  1\n"
        "    X  R3  1  R4  1\n"
        "RHS\n"
        "    RHS  R1  100  R2  100\n"
        "    RHS  R3  99  R4  100\n"
        "ENDATA\n";
    auto mip = parse_mps_string(text);
    SignatureConfig cfg;
    CHECK(constraint_signature(mip, 0, cfg) == constraint_signature(mip, 1, cfg));
    CHECK(constraint_signature(mip, 0, cfg) != constraint_signature(mip, 2, cfg));  // rhs differs
    SECTION("sense flag") {
        CHECK(constraint_signature(mip, 0, cfg) != constraint_signature(mip, 3, cfg));
        SignatureConfig no_sense = cfg;
        no_sense.use_sense = false;
        CHECK(constraint_signature(mip, 0, no_sense) == constraint_signature(mip, 3, no_sense));
    }
}

TEST_CASE("knapsack partition groups the interchangeable items") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    REQUIRE(part.var_classes.size() == 4);
    CHECK(part.var_classes[0] == std::vector<int>{0, 1});
    CHECK(part.var_classes[1] == std::vector<int>{2});
    CHECK(part.var_classes[2] == std::vector<int>{3, 4, 5});
    CHECK(part.var_classes[3] == std::vector<int>{6});
    CHECK(part.nu == 15);  // 4 + 1 + 9 + 1
    CHECK(part.mu == 1);
    SECTION("without the value profile the literal objective/domain grouping appears") {
        SignatureConfig cfg;
        cfg.use_value_profile = false;
        auto loose = build_partition(mip, cfg);
        CHECK(loose.var_classes.size() == 3);  // {1,2,3}, {4,5,6}, {7}
        CHECK(loose.nu == 19);
    }
}

TEST_CASE("partition extremes") {
    SECTION("all variables alike gives nu = n^2") {
        const char* text =
            "NAME S\n"
            "ROWS\n"
            " N  OBJ\n"
            " L  R1\n"
            "COLUMNS\n"
            "    A  OBJ  1  R1  1\n"
            "    B  OBJ  1  R1  1\n"
            "    C  OBJ  1  R1  1\n"
            "RHS\n"
            "    RHS  R1  5\n"
            "ENDATA\n";
        auto part = build_partition(parse_mps_string(text), {});
        CHECK(part.var_classes.size() == 1);
        CHECK(part.nu == 9);
    }
    SECTION("all-distinct objective coefficients give nu = n") {
        const char* text =
            "NAME D\n"
            "ROWS\n"
            " N  OBJ\n"
            " L  R1\n"
            "COLUMNS\n"
            "    A  OBJ  1  R1  1\n"
            "    B  OBJ  2  R1  1\n"
            "    C  OBJ  3  R1  1\n"
            "RHS\n"
            "    RHS  R1  5\n"
            "ENDATA\n";
        auto part = build_partition(parse_mps_string(text), {});
        CHECK(part.nu == 3);
        CHECK(part.mu == 1);
    }
}

TEST_CASE("nu and mu bounds hold on random instances") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        auto mip = oracle::random_mip(seed);
        auto part = build_partition(mip, {});
        long long n = mip.n, m = mip.m;
        CHECK(part.nu >= n);
        CHECK(part.nu <= n * n);
        CHECK(part.mu >= m);
        CHECK(part.mu <= m * m);
    }
}

TEST_CASE("nu and mu are invariant under input reordering") {
    // same knapsack with shuffled column and row order in the file
    const char* shuffled =
        "NAME KNAPSHUF\n"
        "OBJSENSE\n"
        "    MAX\n"
        "ROWS\n"
        " N  COST\n"
        " L  CAP\n"
        "COLUMNS\n"
        "    M0  'MARKER'  'INTORG'\n"
        "    X7  COST  3  CAP  1\n"
        "    X4  COST  2  CAP  1\n"
        "    X1  COST  1  CAP  1\n"
        "    X3  COST  1  CAP  2\n"
        "    X6  COST  2  CAP  1\n"
        "    X2  COST  1  CAP  1\n"
        "    X5  COST  2  CAP  1\n"
        "    M1  'MARKER'  'INTEND'\n"
        "RHS\n"
        "    RHS  CAP  100\n"
        "ENDATA\n";
    auto a = build_partition(knapsack(), {});
    auto b = build_partition(parse_mps_string(shuffled), {});
    CHECK(a.nu == b.nu);
    CHECK(a.mu == b.mu);

    SECTION("row reordering") {
        const char* fwd =
            "NAME R\nROWS\n N  OBJ\n L  R1\n L  R2\n L  R3\nCOLUMNS\n"
            "    A  R1  1\n    A  R2  1\n    B  R2  1  R3  2\n"
            "RHS\n    RHS  R1  1  R2  1  R3  5\nENDATA\n";
        const char* rev =
            "NAME R\nROWS\n N  OBJ\n L  R3\n L  R2\n L  R1\nCOLUMNS\n"
            "    A  R1  1\n    A  R2  1\n    B  R2  1  R3  2\n"
            "RHS\n    RHS  R1  1  R2  1  R3  5\nENDATA\n";
        auto pf = build_partition(parse_mps_string(fwd), {});
        auto pr = build_partition(parse_mps_string(rev), {});
        CHECK(pf.nu == pr.nu);
        CHECK(pf.mu == pr.mu);
    }
}

TEST_CASE("sharpening flags") {
    // A appears in two rows, B in one; same objective and bounds
    const char* text =
        "NAME SH\n"
        "ROWS\n"
        " N  OBJ\n"
        " L  R1\n"
        " L  R2\n"
        "COLUMNS\n"
        "    A  OBJ  1  R1  1\n"
        "    A  R2  1\n"
        "    B  OBJ  1  R1  1\n"
        "RHS\n"
        "    RHS  R1  1  R2  1\n"
        "ENDATA\n";
    auto mip = parse_mps_string(text);
    SignatureConfig plain;
    plain.use_value_profile = false;
    SignatureConfig sharp = plain;
    sharp.sharpen_var_degree = true;
    sharp.sharpen_con_size = true;
    auto loose = build_partition(mip, plain);
    auto tight = build_partition(mip, sharp);
    CHECK(loose.var_classes.size() == 1);
    CHECK(tight.var_classes.size() == 2);   // degree 2 vs 1
    CHECK(loose.con_classes.size() == 1);
    CHECK(tight.con_classes.size() == 2);   // two vars vs one
}

TEST_CASE("coefficient tolerance bucketing") {
    const char* text =
        "NAME T\n"
        "ROWS\n"
        " N  OBJ\n"
        " L  R1\n"
        "COLUMNS\n"
        "    A  OBJ  1.000000000000001  R1  1\n"
        "    B  OBJ  1.0  R1  1\n"
        "RHS\n"
        "    RHS  R1  1\n"
        "ENDATA\n";
    auto mip = parse_mps_string(text);
    SignatureConfig exact;
    auto strict = build_partition(mip, exact);
    CHECK(strict.var_classes.size() == 2);
    SignatureConfig fuzzy;
    fuzzy.tolerance_digits = 12;
    auto loose = build_partition(mip, fuzzy);
    CHECK(loose.var_classes.size() == 1);
}

TEST_CASE("max_decomp_class") {
    SECTION("knapsack picks the size-3 class") {
        auto part = build_partition(knapsack(), {});
        auto [id, size] = max_decomp_class(part);
        CHECK(size == 3);
        CHECK(part.var_classes[static_cast<size_t>(id)] == std::vector<int>{3, 4, 5});
    }
    SECTION("singletons: lowest index wins") {
        const char* text =
            "NAME D\n"
            "ROWS\n"
            " N  OBJ\n"
            " L  R1\n"
            "COLUMNS\n"
            "    A  OBJ  1  R1  1\n"
            "    B  OBJ  2  R1  1\n"
            "RHS\n"
            "    RHS  R1  5\n"
            "ENDATA\n";
        auto part = build_partition(parse_mps_string(text), {});
        auto [id, size] = max_decomp_class(part);
        CHECK(size == 1);
        CHECK(part.var_classes[static_cast<size_t>(id)] == std::vector<int>{0});
    }
    SECTION("tie goes to the class containing the smaller variable index") {
        const char* text =
            "NAME TIE\n"
            "ROWS\n"
            " N  OBJ\n"
            " L  R1\n"
            "COLUMNS\n"
            "    A  OBJ  1  R1  1\n"
            "    B  OBJ  1  R1  1\n"
            "    C  OBJ  2  R1  1\n"
            "    D  OBJ  2  R1  1\n"
            "RHS\n"
            "    RHS  R1  5\n"
            "ENDATA\n";
        auto part = build_partition(parse_mps_string(text), {});
        auto [id, size] = max_decomp_class(part);
        CHECK(size == 2);
        CHECK(part.var_classes[static_cast<size_t>(id)] == std::vector<int>{0, 1});
    }
}

TEST_CASE("partition classes agree with pairwise signature equality") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        auto mip = oracle::random_mip(seed);
        for (SignatureConfig cfg : {SignatureConfig{}, SignatureConfig{.use_bounds = false},
                                    SignatureConfig{.sharpen_var_degree = true,
                                                    .sharpen_con_size = true}}) {
            auto part = build_partition(mip, cfg);
            for (int a = 0; a < mip.n; ++a)
                for (int b = a; b < mip.n; ++b)
                    CHECK(part.same_var_class(a, b) ==
                          (variable_signature(mip, a, cfg) == variable_signature(mip, b, cfg)));
            for (int a = 0; a < mip.m; ++a)
                for (int b = a; b < mip.m; ++b)
                    CHECK(part.same_con_class(a, b) ==
                          (constraint_signature(mip, a, cfg) == constraint_signature(mip, b, cfg)));
        }
    }
}

TEST_CASE("class ids follow first appearance") {
    auto part = build_partition(knapsack(), {});
    CHECK(part.var_class_of[0] == 0);
    CHECK(part.var_class_of[2] == 1);
    CHECK(part.var_class_of[3] == 2);
    CHECK(part.var_class_of[6] == 3);
}
