#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sib/cliques.hpp"
#include "sib/embed.hpp"
#include "sib/error.hpp"
#include "sib/mutalg.hpp"
#include "sib/presentations.hpp"
#include "sib/qftype.hpp"
#include "sib/structure.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitTimeGuard = 4;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw sib::InputError("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw sib::InputError("cannot write file '" + path + "'");
    out << text;
}

sib::Structure load_structure(const std::string& path)
{
    try {
        return sib::parse_structure(read_file(path));
    } catch (const sib::ParseError& e) {
        throw sib::InputError(path + ": " + e.what());
    }
}

sib::Presentation load_presentation(const std::string& path)
{
    return sib::Presentation::from_json(read_file(path));
}

std::vector<sib::Tuple> load_pool(const std::string& path)
{
    std::vector<sib::Tuple> pool;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        sib::Tuple t;
        int v;
        while (ls >> v)
            t.push_back(v);
        if (!t.empty())
            pool.push_back(std::move(t));
    }
    return pool;
}

struct Output {
    bool as_json = false;
    json result;
    std::vector<std::string> warnings;
    std::string human;

    void text(const std::string& line)
    {
        human += line;
        human += '\n';
    }
};

void emit_structure(Output& out, const sib::Structure& s, const std::string& out_path)
{
    std::string text = sib::serialize_structure(s);
    out.result["structure"] = text;
    out.result["size"] = s.size();
    if (!out_path.empty()) {
        write_file(out_path, text);
        out.text("wrote " + out_path);
    } else {
        out.human += text;
    }
}

json witness_to_json(const std::optional<sib::EmbeddingWitness>& w)
{
    if (!w)
        return nullptr;
    return w->map;
}

json issues_to_json(const sib::ValidationReport& report)
{
    json out = json::array();
    for (const sib::ValidationIssue& issue : report.issues)
        out.push_back({{"subject", issue.subject}, {"detail", issue.detail}});
    return out;
}

int parse_int_arg(const std::string& text, const std::string& what)
{
    try {
        std::size_t pos = 0;
        int value = std::stoi(text, &pos);
        if (pos != text.size())
            throw sib::InputError(what + ": expected an integer, got '" + text + "'");
        return value;
    } catch (const std::logic_error&) {
        throw sib::InputError(what + ": expected an integer, got '" + text + "'");
    }
}

std::map<std::string, int> parse_cuts(const std::string& spec)
{
    std::map<std::string, int> cuts;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw sib::InputError("--cut expects LABEL=SIZE[,LABEL=SIZE...]");
        cuts[item.substr(0, eq)] = parse_int_arg(item.substr(eq + 1), "--cut");
    }
    return cuts;
}

std::vector<int> parse_int_list(const std::string& spec)
{
    std::vector<int> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(parse_int_arg(item, "list entry"));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"toolkit for finite relational structures: cliques, mutual algebraicity, embeddings, presentations"};
    app.require_subcommand(1);
    app.fallthrough();

    bool as_json = false;
    int threads = 1;
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--threads", threads, "worker threads (results identical across counts)")
        ->check(CLI::PositiveNumber);

    std::function<void(Output&)> action;

    // parse
    {
        auto* cmd = app.add_subcommand("parse", "parse a structure file and print its canonical form");
        auto file = std::make_shared<std::string>();
        cmd->add_option("file", *file, "structure file")->required();
        cmd->callback([&action, file] {
            action = [file](Output& out) {
                sib::Structure s = load_structure(*file);
                json rels = json::array();
                for (const sib::Relation& r : s.signature().relations())
                    rels.push_back({{"name", r.name}, {"arity", r.arity}});
                out.result["relations"] = rels;
                out.result["fact_count"] = s.fact_count();
                emit_structure(out, s, "");
            };
        });
    }

    // cliques
    {
        auto* cmd = app.add_subcommand("cliques", "enumerate maximal k-cliques");
        auto file = std::make_shared<std::string>();
        auto k = std::make_shared<int>(1);
        auto pool_path = std::make_shared<std::string>();
        cmd->add_option("file", *file)->required();
        cmd->add_option("--k", *k, "tuple length")->required();
        cmd->add_option("--pool", *pool_path, "pool file: one tuple per line");
        cmd->callback([&action, file, k, pool_path] {
            action = [file, k, pool_path](Output& out) {
                sib::Structure s = load_structure(*file);
                sib::CliqueEnumOptions opts;
                if (!pool_path->empty())
                    opts.pool = load_pool(*pool_path);
                std::vector<sib::KClique> cliques = sib::enumerate_maximal_kcliques(s, *k, opts);
                json jcliques = json::array();
                std::vector<int> census;
                for (const sib::KClique& c : cliques) {
                    jcliques.push_back(c.members());
                    census.push_back(c.size());
                }
                std::sort(census.begin(), census.end());
                out.result["k"] = *k;
                out.result["count"] = cliques.size();
                out.result["census"] = census;
                out.result["cliques"] = jcliques;
                out.text("maximal " + std::to_string(*k) + "-cliques: " + std::to_string(cliques.size()));
                std::string sizes = "census:";
                for (int c : census)
                    sizes += " " + std::to_string(c);
                out.text(sizes);
                for (const sib::KClique& c : cliques) {
                    std::string line = "  {";
                    for (int i = 0; i < c.size(); ++i) {
                        line += i ? " (" : "(";
                        const sib::Tuple& t = c.members()[i];
                        for (std::size_t j = 0; j < t.size(); ++j)
                            line += (j ? "," : "") + std::to_string(t[j]);
                        line += ")";
                    }
                    out.text(line + "}");
                }
            };
        });
    }

    // ma
    {
        auto* cmd = app.add_subcommand("ma", "per-relation mutual-algebraicity bounds");
        auto file = std::make_shared<std::string>();
        auto relation = std::make_shared<std::string>();
        cmd->add_option("file", *file)->required();
        cmd->add_option("--relation", *relation, "restrict to one relation");
        cmd->callback([&action, file, relation] {
            action = [file, relation](Output& out) {
                sib::Structure s = load_structure(*file);
                json bounds = json::object();
                for (const sib::Relation& r : s.signature().relations()) {
                    if (!relation->empty() && r.name != *relation)
                        continue;
                    int b = sib::ma_bound(s, r.name);
                    bounds[r.name] = b;
                    out.text(r.name + ": " + std::to_string(b));
                }
                if (!relation->empty() && bounds.empty())
                    throw sib::InputError("unknown relation '" + *relation + "'");
                out.result["bounds"] = bounds;
            };
        });
    }

    // components
    {
        auto* cmd = app.add_subcommand("components", "MA-connected components and their census");
        auto file = std::make_shared<std::string>();
        cmd->add_option("file", *file)->required();
        cmd->callback([&action, file] {
            action = [file](Output& out) {
                sib::Structure s = load_structure(*file);
                auto blocks = sib::ma_components(s);
                out.result["components"] = blocks;
                json census = json::array();
                for (const sib::ComponentClass& cc : sib::component_census(s))
                    census.push_back(
                        {{"structure", sib::serialize_structure(cc.representative)}, {"count", cc.count}});
                out.result["census"] = census;
                for (const auto& b : blocks) {
                    std::string line = "{";
                    for (std::size_t i = 0; i < b.size(); ++i)
                        line += (i ? "," : "") + std::to_string(b[i]);
                    out.text(line + "}");
                }
                out.text("isomorphism classes: " + std::to_string(census.size()));
            };
        });
    }

    // pack
    {
        auto* cmd = app.add_subcommand("pack", "maximum pairwise-disjoint realizations of a formula");
        auto file = std::make_shared<std::string>();
        auto formula = std::make_shared<std::string>();
        auto cap = std::make_shared<int>(32);
        cmd->add_option("file", *file)->required();
        cmd->add_option("--formula", *formula, "conjunction, e.g. 'E(x1,x2)&x1!=x2'")->required();
        cmd->add_option("--cap", *cap, "search cap");
        cmd->callback([&action, file, formula, cap] {
            action = [file, formula, cap](Output& out) {
                sib::Structure s = load_structure(*file);
                sib::QfConjunction phi = sib::QfConjunction::parse(*formula, s.signature());
                int reals = static_cast<int>(sib::enumerate_realizations(s, phi).size());
                int value = sib::max_disjoint_realizations(s, phi, *cap);
                out.result["max_disjoint"] = value;
                out.result["realizations"] = reals;
                out.result["cap"] = *cap;
                out.text("realizations: " + std::to_string(reals));
                out.text("max pairwise disjoint: " + std::to_string(value));
            };
        });
    }

    // embed / iso
    for (bool iso : {false, true}) {
        auto* cmd = iso ? app.add_subcommand("iso", "decide isomorphism")
                        : app.add_subcommand("embed", "find an embedding of A into B");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        cmd->add_option("a", *a_path)->required();
        cmd->add_option("b", *b_path)->required();
        cmd->callback([&action, a_path, b_path, iso] {
            action = [a_path, b_path, iso](Output& out) {
                sib::Structure a = load_structure(*a_path);
                sib::Structure b = load_structure(*b_path);
                auto w = iso ? sib::is_isomorphic(a, b) : sib::find_embedding(a, b);
                out.result[iso ? "isomorphic" : "embeds"] = w.has_value();
                out.result["witness"] = witness_to_json(w);
                if (w) {
                    std::string line = iso ? "isomorphic:" : "embeds:";
                    for (std::size_t i = 0; i < w->map.size(); ++i)
                        line += " " + std::to_string(i) + "->" + std::to_string(w->map[i]);
                    out.text(line);
                } else {
                    out.text(iso ? "not isomorphic" : "no embedding");
                }
            };
        });
    }

    // census
    {
        auto* cmd = app.add_subcommand("census", "bi-embeddability and isomorphism census");
        auto files = std::make_shared<std::vector<std::string>>();
        cmd->add_option("files", *files)->required()->expected(-1);
        cmd->callback([&action, files] {
            action = [files](Output& out) {
                std::vector<sib::Structure> structures;
                for (const std::string& f : *files)
                    structures.push_back(load_structure(f));
                sib::CensusPartition part = sib::census(structures);
                json blocks = json::array();
                for (const auto& block : part.blocks) {
                    json iso_blocks = json::array();
                    for (const auto& ib : block.iso_blocks) {
                        json names = json::array();
                        for (int i : ib.items)
                            names.push_back((*files)[i]);
                        iso_blocks.push_back(names);
                    }
                    blocks.push_back({{"iso_classes", iso_blocks}});
                }
                out.result["block_count"] = part.block_count();
                out.result["blocks"] = blocks;
                out.text("blocks: " + std::to_string(part.block_count()));
                for (const auto& block : part.blocks) {
                    std::string line = "  ";
                    for (const auto& ib : block.iso_blocks)
                        for (int i : ib.items)
                            line += (*files)[i] + " ";
                    out.text(line);
                }
            };
        });
    }

    // age
    {
        auto* cmd = app.add_subcommand("age", "compare ages up to substructure size s");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto s = std::make_shared<int>(3);
        cmd->add_option("a", *a_path)->required();
        cmd->add_option("b", *b_path)->required();
        cmd->add_option("--s", *s, "substructure size bound")->required();
        cmd->callback([&action, a_path, b_path, s] {
            action = [a_path, b_path, s](Output& out) {
                sib::Structure a = load_structure(*a_path);
                sib::Structure b = load_structure(*b_path);
                bool same = sib::same_age_up_to(a, b, *s);
                out.result["same_age_up_to"] = same;
                out.result["s"] = *s;
                out.text(same ? "same age up to size " + std::to_string(*s)
                              : "ages differ at size <= " + std::to_string(*s));
            };
        });
    }

    // validate
    {
        auto* cmd = app.add_subcommand("validate", "brute-force validate a presentation at size t");
        auto file = std::make_shared<std::string>();
        auto t = std::make_shared<int>(3);
        cmd->add_option("pres", *file)->required();
        cmd->add_option("--t", *t, "validation size")->required();
        cmd->callback([&action, &threads, file, t] {
            action = [&threads, file, t](Output& out) {
                sib::Presentation p = load_presentation(*file);
                sib::ValidationReport report = sib::validate(p, *t, threads);
                out.result["valid"] = report.valid;
                out.result["issues"] = issues_to_json(report);
                out.text(report.valid ? "valid" : "INVALID");
                for (const sib::ValidationIssue& issue : report.issues)
                    out.text("  " + issue.subject + ": " + issue.detail);
            };
        });
    }

    // classify
    {
        auto* cmd = app.add_subcommand("classify", "sibling-count verdict for a presentation");
        auto file = std::make_shared<std::string>();
        cmd->add_option("pres", *file)->required();
        cmd->callback([&action, file] {
            action = [file](Output& out) {
                sib::Presentation p = load_presentation(*file);
                sib::SiblingVerdict verdict = sib::classify(p);
                out.result["verdict"] = sib::to_string(verdict.count);
                out.result["justification"] = verdict.justification;
                out.text(sib::to_string(verdict.count) + " (" + verdict.justification + ")");
            };
        });
    }

    // truncate
    {
        auto* cmd = app.add_subcommand("truncate", "instantiate a finite truncation");
        auto file = std::make_shared<std::string>();
        auto t = std::make_shared<int>(0);
        auto out_path = std::make_shared<std::string>();
        cmd->add_option("pres", *file)->required();
        cmd->add_option("--t", *t, "members per infinite family")->required();
        cmd->add_option("-o,--output", *out_path, "write the structure here");
        cmd->callback([&action, file, t, out_path] {
            action = [file, t, out_path](Output& out) {
                emit_structure(out, sib::truncate(load_presentation(*file), *t), *out_path);
            };
        });
    }

    // separate
    {
        auto* cmd = app.add_subcommand("separate", "split families until the partition is separated");
        auto file = std::make_shared<std::string>();
        auto t = std::make_shared<int>(0);
        auto out_path = std::make_shared<std::string>();
        cmd->add_option("pres", *file)->required();
        cmd->add_option("--t", *t, "detection size")->required();
        cmd->add_option("-o,--output", *out_path, "write the presentation here");
        cmd->callback([&action, file, t, out_path] {
            action = [file, t, out_path](Output& out) {
                sib::Presentation p = load_presentation(*file);
                sib::CellularPresentation sep = sib::separate(p.cellular(), *t);
                std::string text = sib::Presentation(sep).to_json();
                out.result["presentation"] = json::parse(text);
                if (!out_path->empty()) {
                    write_file(*out_path, text);
                    out.text("wrote " + *out_path);
                } else {
                    out.human += text;
                }
            };
        });
    }

    // generate
    {
        auto* gen = app.add_subcommand("generate", "family generators");
        gen->require_subcommand(1);

        {
            auto* cmd = gen->add_subcommand("eqrel", "equivalence relation with given class sizes");
            auto classes = std::make_shared<std::string>();
            auto out_path = std::make_shared<std::string>();
            cmd->add_option("--classes", *classes, "comma-separated class sizes")->required();
            cmd->add_option("-o,--output", *out_path);
            cmd->callback([&action, classes, out_path] {
                action = [classes, out_path](Output& out) {
                    emit_structure(out, sib::make_eqrel(parse_int_list(*classes)), *out_path);
                };
            });
        }
        {
            auto* cmd = gen->add_subcommand("nf", "cut grid families to prescribed sizes");
            auto spec = std::make_shared<std::string>();
            auto cut = std::make_shared<std::string>();
            auto t = std::make_shared<int>(0);
            auto out_path = std::make_shared<std::string>();
            cmd->add_option("--spec", *spec, "grid presentation")->required();
            cmd->add_option("--cut", *cut, "LABEL=SIZE[,LABEL=SIZE...]")->required();
            cmd->add_option("--t", *t)->required();
            cmd->add_option("-o,--output", *out_path);
            cmd->callback([&action, spec, cut, t, out_path] {
                action = [spec, cut, t, out_path](Output& out) {
                    sib::Presentation p = load_presentation(*spec);
                    sib::Structure s = sib::generate_nf(p.grid(), parse_cuts(*cut), *t);
                    emit_structure(out, s, *out_path);
                };
            });
        }
        {
            auto* cmd = gen->add_subcommand("mstar", "strand members of a family and prune absorbed singletons");
            auto spec = std::make_shared<std::string>();
            auto family = std::make_shared<int>(0);
            auto ell = std::make_shared<int>(0);
            auto t = std::make_shared<int>(0);
            auto out_path = std::make_shared<std::string>();
            cmd->add_option("--spec", *spec)->required();
            cmd->add_option("--family", *family, "family index")->required();
            cmd->add_option("--ell", *ell)->required();
            cmd->add_option("--t", *t)->required();
            cmd->add_option("-o,--output", *out_path);
            cmd->callback([&action, spec, family, ell, t, out_path] {
                action = [spec, family, ell, t, out_path](Output& out) {
                    sib::Presentation p = load_presentation(*spec);
                    sib::MstarResult r = sib::generate_mstar_ell(p.cellular(), *family, *ell, *t);
                    out.result["largest_finite_one_clique"] = r.largest_finite_one_clique;
                    out.text("largest maximal finite 1-clique: " + std::to_string(r.largest_finite_one_clique));
                    emit_structure(out, r.structure, *out_path);
                };
            });
        }
        {
            auto* cmd = gen->add_subcommand("ns", "disjoint union of selected chain components");
            auto spec = std::make_shared<std::string>();
            auto sel = std::make_shared<std::string>();
            auto t = std::make_shared<int>(0);
            auto out_path = std::make_shared<std::string>();
            cmd->add_option("--spec", *spec)->required();
            cmd->add_option("--s", *sel, "comma-separated chain indices")->required();
            cmd->add_option("--t", *t)->required();
            cmd->add_option("-o,--output", *out_path);
            cmd->callback([&action, spec, sel, t, out_path] {
                action = [spec, sel, t, out_path](Output& out) {
                    sib::Presentation p = load_presentation(*spec);
                    sib::Structure s = sib::generate_ns(p.chain(), parse_int_list(*sel), *t);
                    emit_structure(out, s, *out_path);
                };
            });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    Output out;
    out.as_json = as_json;
    std::string command;
    for (int i = 1; i < argc; ++i)
        command += std::string(i > 1 ? " " : "") + argv[i];

    auto started = std::chrono::steady_clock::now();
    try {
        action(out);
    } catch (const sib::TimeGuardError& e) {
        std::cerr << "time guard: " << e.what() << "\n";
        return kExitTimeGuard;
    } catch (const sib::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInput;
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (as_json) {
        json report;
        report["command"] = command;
        report["result"] = out.result;
        report["timing_ms"] = elapsed.count();
        report["warnings"] = out.warnings;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << out.human;
    }
    return kExitOk;
}
