#pragma once

#include <cstdint>
#include <random>

// Seeded generator for property-style tests; fixed seeds keep runs reproducible.
struct test_rng {
    std::mt19937_64 gen;

    explicit test_rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(gen);
    }
    std::int64_t integer(std::int64_t a, std::int64_t b) {
        return std::uniform_int_distribution<std::int64_t>(a, b)(gen);
    }
};
