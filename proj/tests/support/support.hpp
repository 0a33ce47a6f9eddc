#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hk/analysis.hpp"
#include "hk/composition.hpp"
#include "hk/instantiation.hpp"
#include "hk/io/document.hpp"
#include "hk/run.hpp"

namespace hk::test {

std::filesystem::path corpus_dir();
std::filesystem::path corpus(const std::string& file);
std::string read_file(const std::filesystem::path& p);

/// The composed case-study module entry • guest_area • kitchen, parsed from the corpus.
std::shared_ptr<const Module> branch_module();
std::shared_ptr<const Structure> s0();
System branch_system();
/// S0 cut down to the first `tables` tables, `clients` clients and `items`
/// menu entries (with the matching meal items).
std::shared_ptr<const Structure> restricted_s0(std::size_t tables, std::size_t clients, std::size_t items);
System branch_system(std::shared_ptr<const Structure> s);

std::vector<Step> a0_script();

// ---- oracles ----

/// Every total assignment over the carriers, filtered by the firing rule
/// evaluated from scratch; no pattern matching.
std::vector<Binding> brute_force_bindings(const SchematicNet& net, const Marking& m, std::size_t t,
                                          const Structure& s);

/// Tries all node permutations; only for small graphs.
bool brute_force_isomorphic(const LabeledGraph& a, const LabeledGraph& b);

// ---- generators ----

/// Signature with sets A and B, subset C of pow(A), a constant a0: A and
/// function h: A -> B. Variables x: A, y: B, z: A, X: C.
std::shared_ptr<const Signature> toy_signature();
std::shared_ptr<const Structure> toy_structure(std::size_t a_size, std::size_t b_size);

/// Label bookkeeping so that a triple of modules never produces colliding
/// interface labels: each label occurs in at most one left and one right interface.
struct LabelPool {
  std::set<std::string> used_left;
  std::set<std::string> used_right;
};

/// Random well-formed module over toy_signature(). Interface labels come from
/// a fixed pool; a label determines kind and sort, so matches are compatible.
Module random_module(std::mt19937_64& rng, const std::string& name, LabelPool& pool);

/// Random well-formed document of a random kind; scope receives the signature
/// needed to parse modules and structures.
io::ModelDocument random_document(std::mt19937_64& rng, io::Scope& scope);

/// Random occurrence net with consistent interfaces (not tied to any system).
Run random_run(std::mt19937_64& rng);

}  // namespace hk::test
