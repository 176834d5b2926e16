#include <catch2/catch.hpp>

#include "mipsym/build.hpp"
#include "mipsym/mps.hpp"
#include "mipsym/symmetry.hpp"
#include "oracle.hpp"

using namespace mipsym;

namespace {

MipInstance knapsack() { return parse_mps_string(oracle::knapsack_mps()); }

std::vector<uint8_t> identity_assignment(const VarRegistry& reg) {
    std::vector<uint8_t> bits(static_cast<size_t>(reg.size()), 0);
    for (int idx = 0; idx < reg.size(); ++idx) {
        const VarRef& e = reg.entries()[static_cast<size_t>(idx)];
        if (e.a == e.b) bits[static_cast<size_t>(idx)] = 1;
    }
    return bits;
}

std::vector<uint8_t> random_bits(std::mt19937_64& rng, int q) {
    std::vector<uint8_t> bits(static_cast<size_t>(q));
    for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
    return bits;
}

}  // namespace

TEST_CASE("registry sizes match the size formulas") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});

    SECTION("full: n^2 + m^2 = 50") {
        auto model = build_full(mip, part);
        CHECK(model.registry().size() == 50);
    }
    SECTION("reduced: nu + mu = 16, ratio 0.32") {
        auto model = build_reduced(mip, part);
        CHECK(model.registry().size() == 16);
        CHECK(16.0 / 50.0 == 0.32);
    }
    SECTION("decomposed over the class of x4") {
        int class_id = part.var_class_of[3];
        auto penalty = build_decomposed(mip, part, class_id, {}, FixMode::penalty);
        CHECK(penalty.registry().pi_count() == 13);  // 9 block + 4 diagonal
        CHECK(penalty.registry().total_entries() == 14);  // |C|^2 + (n-|C|) + mu
        auto constants = build_decomposed(mip, part, class_id, {}, FixMode::constants);
        CHECK(constants.registry().size() == 10);  // |C|^2 + mu live
        CHECK(constants.registry().total_entries() == 14);
        CHECK(static_cast<int>(constants.registry().fixed_ones().size()) == 4);
    }
    SECTION("formulas on random instances") {
        for (uint64_t seed = 1; seed <= 30; ++seed) {
            auto rmip = oracle::random_mip(seed);
            auto rpart = build_partition(rmip, {});
            long long n = rmip.n, m = rmip.m;
            CHECK(build_full(rmip, rpart).registry().size() == n * n + m * m);
            CHECK(build_reduced(rmip, rpart).registry().size() == rpart.nu + rpart.mu);
            for (int c = 0; c < static_cast<int>(rpart.var_classes.size()); ++c) {
                long long size = static_cast<long long>(rpart.var_classes[static_cast<size_t>(c)].size());
                auto dm = build_decomposed(rmip, rpart, c, {}, FixMode::penalty);
                CHECK(dm.registry().total_entries() == size * size + (n - size) + rpart.mu);
            }
        }
    }
}

TEST_CASE("degenerate instances are rejected") {
    const char* no_rows =
        "NAME X\nROWS\n N  OBJ\nCOLUMNS\n    A  OBJ  1\nENDATA\n";
    auto mip = parse_mps_string(no_rows);
    auto part = build_partition(mip, {});
    CHECK_THROWS_WITH(build_full(mip, part), Catch::Contains("degenerate"));
    CHECK_THROWS_WITH(build_reduced(mip, part), Catch::Contains("degenerate"));
    CHECK_THROWS_AS(build_quboplus_full(mip, part), std::invalid_argument);
}

TEST_CASE("identity assignment has zero energy in every formulation") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto mip = oracle::random_mip(seed);
        auto part = build_partition(mip, {});
        CHECK(build_full(mip, part).energy(identity_assignment(build_full(mip, part).registry())) ==
              0.0);
        auto reduced = build_reduced(mip, part);
        CHECK(reduced.energy(identity_assignment(reduced.registry())) == 0.0);
        for (int c = 0; c < static_cast<int>(part.var_classes.size()); ++c)
            for (FixMode mode : {FixMode::constants, FixMode::penalty}) {
                auto dm = build_decomposed(mip, part, c, {}, mode);
                CHECK(dm.energy(identity_assignment(dm.registry())) == 0.0);
            }
    }
}

TEST_CASE("knapsack swap energies") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    auto model = build_full(mip, part);
    const VarRegistry& reg = model.registry();

    auto swap_assignment = [&](int a, int b) {
        std::vector<int> pi(7), sigma(1, 0);
        std::iota(pi.begin(), pi.end(), 0);
        std::swap(pi[static_cast<size_t>(a)], pi[static_cast<size_t>(b)]);
        return *oracle::assignment_for(reg, pi, sigma);
    };

    SECTION("swapping the interchangeable pair is zero-energy") {
        CHECK(model.energy(swap_assignment(0, 1)) == 0.0);
    }
    SECTION("swapping x1 and x3 costs the two unreasonable entries plus two mismatches") {
        CHECK(model.energy(swap_assignment(0, 2)) == 4.0);
    }
    SECTION("two-variable instance with distinct objective") {
        const char* text =
            "NAME TWO\nROWS\n N  OBJ\n L  R1\nCOLUMNS\n"
            "    A  OBJ  1  R1  1\n    B  OBJ  2  R1  1\n"
            "RHS\n    RHS  R1  1\nENDATA\n";
        auto two = parse_mps_string(text);
        auto tpart = build_partition(two, {});
        auto tmodel = build_full(two, tpart);
        std::vector<int> pi = {1, 0}, sigma = {0};
        auto bits = *oracle::assignment_for(tmodel.registry(), pi, sigma);
        // both swap entries unreasonable; the constraint row matches, so no
        // coefficient-mismatch contribution
        CHECK(tmodel.energy(bits) == 2.0);
    }
}

TEST_CASE("trivial 1x1 instance") {
    const char* text =
        "NAME ONE\nROWS\n N  OBJ\n L  R1\nCOLUMNS\n    A  OBJ  1  R1  1\n"
        "RHS\n    RHS  R1  1\nENDATA\n";
    auto mip = parse_mps_string(text);
    auto part = build_partition(mip, {});
    auto model = build_full(mip, part);
    REQUIRE(model.registry().size() == 2);
    auto zeros = oracle::zero_set_plain(model);
    REQUIRE(zeros.size() == 1);
    CHECK(*zeros.begin() == std::vector<uint8_t>{1, 1});
}

TEST_CASE("expanded energy equals direct evaluation of the penalty expressions") {
    std::mt19937_64 rng(7);
    PenaltyWeights weights;
    weights.permutation_pi = 2.0;
    weights.permutation_sigma = 1.5;
    weights.reasonable_pi = 3.0;
    weights.reasonable_sigma = 1.25;
    weights.coefficient_match = 0.5;
    weights.diagonal_fix = 2.5;

    for (uint64_t seed = 1; seed <= 12; ++seed) {
        auto mip = oracle::random_mip(seed, 4, 2);
        auto part = build_partition(mip, {});

        auto check_form = [&](const QuboModel& model, oracle::TestForm form, int class_id) {
            for (int t = 0; t < 100; ++t) {
                auto bits = random_bits(rng, model.registry().size());
                double direct = oracle::direct_energy(mip, part, form, class_id, model.weights(),
                                                      model.registry(), bits);
                CHECK(model.energy(bits) == Approx(direct).margin(1e-9));
            }
        };

        check_form(build_full(mip, part), oracle::TestForm::full, -1);
        check_form(build_full(mip, part, weights), oracle::TestForm::full, -1);
        check_form(build_reduced(mip, part), oracle::TestForm::reduced, -1);
        check_form(build_reduced(mip, part, weights), oracle::TestForm::reduced, -1);
        for (int c = 0; c < static_cast<int>(part.var_classes.size()); ++c) {
            check_form(build_decomposed(mip, part, c, weights, FixMode::penalty),
                       oracle::TestForm::decomposed, c);
            check_form(build_decomposed(mip, part, c, weights, FixMode::constants),
                       oracle::TestForm::decomposed, c);
        }
    }
}

TEST_CASE("energy is nonnegative for positive weights") {
    std::mt19937_64 rng(11);
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        auto mip = oracle::random_mip(seed, 4, 2);
        auto part = build_partition(mip, {});
        auto model = build_full(mip, part);
        auto reduced = build_reduced(mip, part);
        for (int t = 0; t < 200; ++t) {
            CHECK(model.energy(random_bits(rng, model.registry().size())) >= 0.0);
            CHECK(reduced.energy(random_bits(rng, reduced.registry().size())) >= 0.0);
        }
    }
}

TEST_CASE("full energy equals reduced energy on assignments supported by reasonable entries") {
    std::mt19937_64 rng(13);
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        auto mip = oracle::random_mip(seed, 4, 2);
        auto part = build_partition(mip, {});
        auto full = build_full(mip, part);
        auto reduced = build_reduced(mip, part);
        for (int t = 0; t < 100; ++t) {
            auto rbits = random_bits(rng, reduced.registry().size());
            std::vector<uint8_t> fbits(static_cast<size_t>(full.registry().size()), 0);
            for (int idx = 0; idx < reduced.registry().size(); ++idx) {
                const VarRef& e = reduced.registry().entries()[static_cast<size_t>(idx)];
                fbits[static_cast<size_t>(full.registry().index_of(e))] =
                    rbits[static_cast<size_t>(idx)];
            }
            CHECK(full.energy(fbits) == reduced.energy(rbits));
        }
    }
}

TEST_CASE("energy rejects length mismatches") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    auto model = build_reduced(mip, part);
    std::vector<uint8_t> bits(15, 0);
    CHECK_THROWS_AS(model.energy(bits), std::invalid_argument);
}

TEST_CASE("QUBO-Plus constraint counts") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    SECTION("full and reduced have 2n + 2m constraints") {
        CHECK(build_quboplus_full(mip, part).constraints.size() == 16);
        CHECK(build_quboplus_reduced(mip, part).constraints.size() == 16);
    }
    SECTION("reduced constraint supports mirror the classes") {
        auto plus = build_quboplus_reduced(mip, part);
        std::multiset<size_t> sizes;
        for (size_t k = 0; k < 7; ++k) sizes.insert(plus.constraints[k].coeffs.size());
        CHECK(sizes == std::multiset<size_t>{1, 1, 2, 2, 3, 3, 3});
    }
    SECTION("decomposed: 2|C| + 2m + (n - |C|)") {
        int class_id = part.var_class_of[3];
        auto plus = build_quboplus_decomposed(mip, part, class_id);
        CHECK(plus.constraints.size() == 2 * 3 + 2 * 1 + 4);  // 12
    }
    SECTION("counts on random instances") {
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            auto rmip = oracle::random_mip(seed);
            auto rpart = build_partition(rmip, {});
            size_t expect = 2 * static_cast<size_t>(rmip.n) + 2 * static_cast<size_t>(rmip.m);
            CHECK(build_quboplus_full(rmip, rpart).constraints.size() == expect);
            CHECK(build_quboplus_reduced(rmip, rpart).constraints.size() == expect);
            for (int c = 0; c < static_cast<int>(rpart.var_classes.size()); ++c) {
                size_t cs = rpart.var_classes[static_cast<size_t>(c)].size();
                CHECK(build_quboplus_decomposed(rmip, rpart, c).constraints.size() ==
                      2 * cs + 2 * static_cast<size_t>(rmip.m) +
                          (static_cast<size_t>(rmip.n) - cs));
            }
        }
    }
    SECTION("1x1 instance: four singleton constraints force the identity") {
        const char* text =
            "NAME ONE\nROWS\n N  OBJ\n L  R1\nCOLUMNS\n    A  OBJ  1  R1  1\n"
            "RHS\n    RHS  R1  1\nENDATA\n";
        auto one = parse_mps_string(text);
        auto opart = build_partition(one, {});
        auto plus = build_quboplus_full(one, opart);
        REQUIRE(plus.constraints.size() == 4);
        for (const auto& con : plus.constraints) CHECK(con.coeffs.size() == 1);
    }
}

TEST_CASE("penalty reduction of QUBO-Plus reproduces the plain QUBOs coefficient for coefficient") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        auto mip = oracle::random_mip(seed);
        auto part = build_partition(mip, {});
        CHECK(quboplus_to_qubo(build_quboplus_full(mip, part), 1.0)
                  .same_coefficients(build_full(mip, part)));
        CHECK(quboplus_to_qubo(build_quboplus_reduced(mip, part), 1.0)
                  .same_coefficients(build_reduced(mip, part)));
        for (int c = 0; c < static_cast<int>(part.var_classes.size()); ++c)
            CHECK(quboplus_to_qubo(build_quboplus_decomposed(mip, part, c), 1.0)
                      .same_coefficients(build_decomposed(mip, part, c, {}, FixMode::penalty)));
    }
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    CHECK(quboplus_to_qubo(build_quboplus_reduced(mip, part), 1.0)
              .same_coefficients(build_reduced(mip, part)));
}

TEST_CASE("penalty reduction rejects non-positive penalties") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    auto plus = build_quboplus_reduced(mip, part);
    CHECK_THROWS_AS(quboplus_to_qubo(plus, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(quboplus_to_qubo(plus, -1.0), std::invalid_argument);
}

TEST_CASE("zero level set does not depend on the weights") {
    std::mt19937_64 rng(17);
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        auto mip = oracle::random_mip(seed, 3, 2);
        auto part = build_partition(mip, {});
        auto base = oracle::zero_set(build_reduced(mip, part));
        for (int t = 0; t < 10; ++t) {
            PenaltyWeights w;
            auto dyadic = [&] { return static_cast<double>(oracle::rand_int(rng, 1, 32)) / 8.0; };
            w.permutation_pi = dyadic();
            w.permutation_sigma = dyadic();
            w.reasonable_pi = dyadic();
            w.reasonable_sigma = dyadic();
            w.coefficient_match = dyadic();
            w.diagonal_fix = dyadic();
            CHECK(oracle::zero_set(build_reduced(mip, part, w)) == base);
        }
    }
}

TEST_CASE("tolerance bucketing flows through building, sampling and verification") {
    // two columns equal to 12 significant digits but not exactly
    const char* text =
        "NAME TOL\nROWS\n N  OBJ\n L  R1\nCOLUMNS\n"
        "    A  OBJ  0.1  R1  1\n"
        "    B  OBJ  0.1000000000000001  R1  1\n"
        "RHS\n    RHS  R1  3\nENDATA\n";
    auto mip = parse_mps_string(text);

    SignatureConfig fuzzy;
    fuzzy.tolerance_digits = 12;
    auto fpart = build_partition(mip, fuzzy);
    REQUIRE(fpart.nu == 4);  // one two-member class
    auto fmodel = build_reduced(mip, fpart);
    auto fzeros = oracle::zero_set_plain(fmodel);
    CHECK(fzeros.size() == 2);  // identity and the swap
    for (const auto& bits : fzeros) {
        auto d = decode_and_verify(mip, fmodel.registry(), bits, fuzzy);
        CHECK(d.is_symmetry);
    }
    CHECK(brute_force_symmetries(mip, fpart).size() == 2);

    SignatureConfig exact;  // defaults: exact coefficient equality
    auto epart = build_partition(mip, exact);
    CHECK(epart.nu == 2);
    CHECK(oracle::zero_set_plain(build_full(mip, epart)).size() == 1);
    CHECK(brute_force_symmetries(mip, epart).size() == 1);
}

TEST_CASE("invalid weights and class ids are rejected") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    PenaltyWeights w;
    w.coefficient_match = 0.0;
    CHECK_THROWS_AS(build_full(mip, part, w), std::invalid_argument);
    CHECK_THROWS_AS(build_decomposed(mip, part, 99), std::invalid_argument);
    CHECK_THROWS_AS(build_quboplus_decomposed(mip, part, -1), std::invalid_argument);
}

TEST_CASE("models never store zero coefficients or degenerate quadratic keys") {
    auto inspect = [](const QuboModel& model) {
        for (const auto& [i, v] : model.linear()) {
            (void)i;
            CHECK(v != 0.0);
        }
        for (const auto& [key, v] : model.quadratic()) {
            CHECK(key.first < key.second);
            CHECK(v != 0.0);
        }
    };
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        auto mip = oracle::random_mip(seed);
        auto part = build_partition(mip, {});
        inspect(build_full(mip, part));
        inspect(build_reduced(mip, part));
        for (int c = 0; c < static_cast<int>(part.var_classes.size()); ++c) {
            inspect(build_decomposed(mip, part, c, {}, FixMode::constants));
            inspect(build_decomposed(mip, part, c, {}, FixMode::penalty));
        }
        inspect(quboplus_to_qubo(build_quboplus_reduced(mip, part), 2.0));
    }
}

TEST_CASE("registry ordering is deterministic and lexicographic per tag") {
    auto mip = knapsack();
    auto part = build_partition(mip, {});
    auto model = build_reduced(mip, part);
    const auto& entries = model.registry().entries();
    bool seen_sigma = false;
    for (size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].kind == VarKind::sigma) seen_sigma = true;
        if (seen_sigma) CHECK(entries[k].kind == VarKind::sigma);
        if (k > 0 && entries[k - 1].kind == entries[k].kind)
            CHECK(std::make_pair(entries[k - 1].a, entries[k - 1].b) <
                  std::make_pair(entries[k].a, entries[k].b));
    }
}
