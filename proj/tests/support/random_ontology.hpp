#pragma once

// Seeded generators for small random ontologies.

#include "elprov/ontology.hpp"

#include <random>
#include <vector>

namespace gen {

struct Shape {
    int max_axioms = 6;
    int concepts = 4;     // A, B, C, D
    int roles = 2;        // R, S
    int individuals = 3;  // a, b, c
    int variables = 4;    // v1..v4
    double unit_annotation = 0.15;
    double top_probability = 0.1;
};

elprov::Ontology random_normalized(std::mt19937& rng, const Shape& s = {});
// Complex left-hand sides (nested conjunctions and existentials).
elprov::Ontology random_general(std::mt19937& rng, const Shape& s = {}, int depth = 2);

std::vector<elprov::Monomial> all_monomials(const std::set<elprov::Variable>& vars);

}  // namespace gen
