#include "sib/presentations.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>
#include <set>
#include <sstream>

#include "json.hpp"

#include "sib/cliques.hpp"
#include "sib/embed.hpp"
#include "sib/error.hpp"
#include "sib/mutalg.hpp"

namespace sib {

using nlohmann::json;

namespace {

std::string fact_to_string(const Signature& sig, int rel, const Tuple& args)
{
    std::string out = sig.relation(rel).name + "(";
    for (std::size_t i = 0; i < args.size(); ++i)
        out += (i ? "," : "") + std::to_string(args[i]);
    return out + ")";
}

void check_family_fact(const Signature& sig, const Structure& base, const FamilyFact& ff, int k,
    bool allow_pos, bool allow_pair, const std::string& where)
{
    if (ff.rel < 0 || ff.rel >= sig.relation_count())
        throw InputError(where + ": unknown relation index");
    if (static_cast<int>(ff.entries.size()) != sig.relation(ff.rel).arity)
        throw InputError(where + ": arity mismatch for relation '" + sig.relation(ff.rel).name + "'");
    bool has_pos = false, has_first = false, has_second = false;
    for (const PatEntry& e : ff.entries) {
        switch (e.kind) {
        case PatEntry::Kind::Base:
            if (e.value < 0 || e.value >= base.size())
                throw InputError(where + ": base element out of range");
            break;
        case PatEntry::Kind::Pos:
            if (!allow_pos)
                throw InputError(where + ": 'pos' entry not allowed here");
            if (e.value < 0 || e.value >= k)
                throw InputError(where + ": member position out of range");
            has_pos = true;
            break;
        case PatEntry::Kind::First:
        case PatEntry::Kind::Second:
            if (!allow_pair)
                throw InputError(where + ": pair entry not allowed here");
            if (e.value < 0 || e.value >= k)
                throw InputError(where + ": member position out of range");
            (e.kind == PatEntry::Kind::First ? has_first : has_second) = true;
            break;
        case PatEntry::Kind::Slot:
            throw InputError(where + ": 'slot' entry not allowed here");
        }
    }
    if (allow_pos && !has_pos)
        throw InputError(where + ": pattern must touch the member");
    if (allow_pair && (!has_first || !has_second))
        throw InputError(where + ": pattern must touch both members of the pair");
}

void check_cellular(const CellularPresentation& p)
{
    std::set<std::string> names;
    for (const Family& f : p.families) {
        if (f.name.empty())
            throw InputError("family name must be nonempty");
        if (!names.insert(f.name).second)
            throw InputError("duplicate family name '" + f.name + "'");
        if (f.k < 1)
            throw InputError("family '" + f.name + "': tuple length must be at least 1");
        if (f.count && *f.count < 0)
            throw InputError("family '" + f.name + "': negative count");
        for (const FamilyFact& ff : f.internal_facts) {
            check_family_fact(p.sig, p.base, ff, f.k, true, false, "family '" + f.name + "' internal fact");
            for (const PatEntry& e : ff.entries)
                if (e.kind == PatEntry::Kind::Base)
                    throw InputError("family '" + f.name + "': internal facts may not touch the base");
        }
        for (const FamilyFact& ff : f.base_facts)
            check_family_fact(p.sig, p.base, ff, f.k, true, false, "family '" + f.name + "' base fact");
        for (const FamilyFact& ff : f.cross_facts)
            check_family_fact(p.sig, p.base, ff, f.k, false, true, "family '" + f.name + "' cross fact");
    }
    for (const Family& f : p.families)
        for (const CrossFamilyBlock& blk : f.cross_family_facts) {
            auto it = std::find_if(p.families.begin(), p.families.end(),
                [&](const Family& g) { return g.name == blk.other; });
            if (it == p.families.end())
                throw InputError("family '" + f.name + "': cross-family block names unknown family '" + blk.other + "'");
            for (const FamilyFact& ff : blk.facts) {
                if (ff.rel < 0 || ff.rel >= p.sig.relation_count())
                    throw InputError("cross-family fact: unknown relation");
                if (static_cast<int>(ff.entries.size()) != p.sig.relation(ff.rel).arity)
                    throw InputError("cross-family fact: arity mismatch");
                bool has_first = false, has_second = false;
                for (const PatEntry& e : ff.entries) {
                    switch (e.kind) {
                    case PatEntry::Kind::First:
                        if (e.value < 0 || e.value >= f.k)
                            throw InputError("cross-family fact: first position out of range");
                        has_first = true;
                        break;
                    case PatEntry::Kind::Second:
                        if (e.value < 0 || e.value >= it->k)
                            throw InputError("cross-family fact: second position out of range");
                        has_second = true;
                        break;
                    case PatEntry::Kind::Base:
                        if (e.value < 0 || e.value >= p.base.size())
                            throw InputError("cross-family fact: base element out of range");
                        break;
                    default:
                        throw InputError("cross-family fact: entry kind not allowed");
                    }
                }
                if (!has_first || !has_second)
                    throw InputError("cross-family fact must touch both families");
            }
        }
}

void check_grid(const GridPresentation& g)
{
    if (g.k < 1)
        throw InputError("grid: k must be at least 1");
    int rel = g.sig.index_of(g.relation);
    if (rel < 0)
        throw InputError("grid: unknown relation '" + g.relation + "'");
    if (g.sig.relation(rel).arity != g.k + static_cast<int>(g.witness_entries.size()))
        throw InputError("grid: arity of '" + g.relation + "' must equal k + witness length");
    std::set<std::string> labels(g.labels.begin(), g.labels.end());
    if (labels.size() != g.labels.size())
        throw InputError("grid: duplicate labels");
    if (g.labels.empty())
        throw InputError("grid: at least one label required");
    for (const FamilyFact& ff : g.clique_internal) {
        check_family_fact(g.sig, g.base, ff, g.k, true, false, "grid clique internal fact");
        for (const PatEntry& e : ff.entries)
            if (e.kind == PatEntry::Kind::Base)
                throw InputError("grid clique internal facts may not touch the base");
    }
    for (const FamilyFact& ff : g.clique_base)
        check_family_fact(g.sig, g.base, ff, g.k, true, false, "grid clique base fact");
    for (const FamilyFact& ff : g.clique_cross)
        check_family_fact(g.sig, g.base, ff, g.k, false, true, "grid clique cross fact");

    std::set<int> per_q_slots, per_pair_slots;
    for (const WitnessEntry& e : g.witness_entries) {
        switch (e.kind) {
        case WitnessEntry::Kind::Base:
            if (e.value < 0 || e.value >= g.base.size())
                throw InputError("grid witness entry: base element out of range");
            break;
        case WitnessEntry::Kind::MemberCoord:
            if (e.value < 0 || e.value >= g.k)
                throw InputError("grid witness entry: member coordinate out of range");
            break;
        case WitnessEntry::Kind::FreshPerQ:
            if (per_pair_slots.count(e.value))
                throw InputError("grid witness slots must have distinct ids across kinds");
            per_q_slots.insert(e.value);
            break;
        case WitnessEntry::Kind::FreshPerPair:
            if (per_q_slots.count(e.value))
                throw InputError("grid witness slots must have distinct ids across kinds");
            per_pair_slots.insert(e.value);
            break;
        }
    }
    for (const FamilyFact& ff : g.witness_facts) {
        if (ff.rel < 0 || ff.rel >= g.sig.relation_count())
            throw InputError("grid witness fact: unknown relation");
        if (static_cast<int>(ff.entries.size()) != g.sig.relation(ff.rel).arity)
            throw InputError("grid witness fact: arity mismatch");
        for (const PatEntry& e : ff.entries) {
            if (e.kind == PatEntry::Kind::Slot) {
                if (!per_q_slots.count(e.value) && !per_pair_slots.count(e.value))
                    throw InputError("grid witness fact references undeclared slot " + std::to_string(e.value));
            } else if (e.kind == PatEntry::Kind::Base) {
                if (e.value < 0 || e.value >= g.base.size())
                    throw InputError("grid witness fact: base element out of range");
            } else {
                throw InputError("grid witness facts admit only slot and base entries");
            }
        }
    }
}

void check_chain(const ComponentChainSpec& c)
{
    for (const Structure& s : c.chain) {
        if (!(s.signature() == c.sig))
            throw InputError("chain component signature mismatch");
        if (s.size() < 1)
            throw InputError("chain components must be nonempty");
    }
    for (const Structure& s : c.background)
        if (!(s.signature() == c.sig))
            throw InputError("background component signature mismatch");
}

} // namespace

int GridPresentation::rank() const
{
    int r = 0;
    for (const WitnessEntry& e : witness_entries)
        if (e.kind == WitnessEntry::Kind::FreshPerQ || e.kind == WitnessEntry::Kind::FreshPerPair)
            ++r;
    return r;
}

Presentation::Presentation(CellularPresentation p) : v_(std::move(p))
{
    check_cellular(std::get<CellularPresentation>(v_));
}

Presentation::Presentation(GridPresentation p) : v_(std::move(p))
{
    check_grid(std::get<GridPresentation>(v_));
}

Presentation::Presentation(ComponentChainSpec p) : v_(std::move(p))
{
    check_chain(std::get<ComponentChainSpec>(v_));
}

Presentation::Kind Presentation::kind() const
{
    if (std::holds_alternative<CellularPresentation>(v_))
        return Kind::Cellular;
    if (std::holds_alternative<GridPresentation>(v_))
        return Kind::Grid;
    return Kind::Chain;
}

const CellularPresentation& Presentation::cellular() const
{
    if (!std::holds_alternative<CellularPresentation>(v_))
        throw InputError("presentation is not cellular");
    return std::get<CellularPresentation>(v_);
}

const GridPresentation& Presentation::grid() const
{
    if (!std::holds_alternative<GridPresentation>(v_))
        throw InputError("presentation is not a grid");
    return std::get<GridPresentation>(v_);
}

const ComponentChainSpec& Presentation::chain() const
{
    if (!std::holds_alternative<ComponentChainSpec>(v_))
        throw InputError("presentation is not a component chain");
    return std::get<ComponentChainSpec>(v_);
}

const Signature& Presentation::signature() const
{
    switch (kind()) {
    case Kind::Cellular:
        return cellular().sig;
    case Kind::Grid:
        return grid().sig;
    default:
        return chain().sig;
    }
}

namespace {

Tuple instantiate_entries(const std::vector<PatEntry>& entries, const Tuple* member, const Tuple* first,
    const Tuple* second)
{
    Tuple out;
    out.reserve(entries.size());
    for (const PatEntry& e : entries) {
        switch (e.kind) {
        case PatEntry::Kind::Base:
            out.push_back(e.value);
            break;
        case PatEntry::Kind::Pos:
            out.push_back((*member)[e.value]);
            break;
        case PatEntry::Kind::First:
            out.push_back((*first)[e.value]);
            break;
        case PatEntry::Kind::Second:
            out.push_back((*second)[e.value]);
            break;
        case PatEntry::Kind::Slot:
            throw std::logic_error("slot entry outside witness context");
        }
    }
    return out;
}

int family_member_count(const Family& f, int t)
{
    return f.count ? std::min(*f.count, t) : t;
}

Truncation instantiate_cellular(const CellularPresentation& p, int t)
{
    TruncationLayout layout;
    int next = p.base.size();
    for (int e = 0; e < p.base.size(); ++e)
        layout.origins.push_back({ElementOrigin::Kind::Base, -1, -1, -1, -1});

    layout.members.resize(p.families.size());
    for (std::size_t fi = 0; fi < p.families.size(); ++fi) {
        const Family& f = p.families[fi];
        int count = family_member_count(f, t);
        for (int j = 0; j < count; ++j) {
            Tuple member(f.k);
            for (int c = 0; c < f.k; ++c) {
                member[c] = next++;
                layout.origins.push_back({ElementOrigin::Kind::Member, static_cast<int>(fi), j, c, -1});
            }
            layout.members[fi].push_back(std::move(member));
        }
    }

    std::vector<Fact> facts = p.base.all_facts();
    for (std::size_t fi = 0; fi < p.families.size(); ++fi) {
        const Family& f = p.families[fi];
        const auto& members = layout.members[fi];
        for (const Tuple& m : members) {
            for (const FamilyFact& ff : f.internal_facts)
                facts.push_back({ff.rel, instantiate_entries(ff.entries, &m, nullptr, nullptr)});
            for (const FamilyFact& ff : f.base_facts)
                facts.push_back({ff.rel, instantiate_entries(ff.entries, &m, nullptr, nullptr)});
        }
        for (std::size_t j1 = 0; j1 < members.size(); ++j1)
            for (std::size_t j2 = 0; j2 < members.size(); ++j2) {
                if (j1 == j2)
                    continue;
                for (const FamilyFact& ff : f.cross_facts)
                    facts.push_back({ff.rel, instantiate_entries(ff.entries, nullptr, &members[j1], &members[j2])});
            }
        for (const CrossFamilyBlock& blk : f.cross_family_facts) {
            std::size_t gi = 0;
            while (p.families[gi].name != blk.other)
                ++gi;
            for (const Tuple& m1 : members)
                for (const Tuple& m2 : layout.members[gi]) {
                    if (gi == fi && m1 == m2)
                        continue;
                    for (const FamilyFact& ff : blk.facts)
                        facts.push_back({ff.rel, instantiate_entries(ff.entries, nullptr, &m1, &m2)});
                }
        }
    }
    return {Structure(p.base.signature_ptr(), next, std::move(facts)), std::move(layout)};
}

struct GridSlots {
    std::vector<int> per_q_ids;   // declared order
    std::vector<int> per_pair_ids;

    int per_q_index(int id) const
    {
        auto it = std::find(per_q_ids.begin(), per_q_ids.end(), id);
        return it == per_q_ids.end() ? -1 : static_cast<int>(it - per_q_ids.begin());
    }
    int per_pair_index(int id) const
    {
        auto it = std::find(per_pair_ids.begin(), per_pair_ids.end(), id);
        return it == per_pair_ids.end() ? -1 : static_cast<int>(it - per_pair_ids.begin());
    }
};

GridSlots grid_slots(const GridPresentation& g)
{
    GridSlots s;
    for (const WitnessEntry& e : g.witness_entries) {
        if (e.kind == WitnessEntry::Kind::FreshPerQ && s.per_q_index(e.value) < 0)
            s.per_q_ids.push_back(e.value);
        if (e.kind == WitnessEntry::Kind::FreshPerPair && s.per_pair_index(e.value) < 0)
            s.per_pair_ids.push_back(e.value);
    }
    return s;
}

Truncation instantiate_grid(const GridPresentation& g, int t)
{
    GridSlots slots = grid_slots(g);
    int nlabels = static_cast<int>(g.labels.size());

    TruncationLayout layout;
    int next = g.base.size();
    for (int e = 0; e < g.base.size(); ++e)
        layout.origins.push_back({ElementOrigin::Kind::Base, -1, -1, -1, -1});

    layout.members.resize(nlabels);
    for (int q = 0; q < nlabels; ++q)
        for (int j = 0; j < t; ++j) {
            Tuple member(g.k);
            for (int c = 0; c < g.k; ++c) {
                member[c] = next++;
                layout.origins.push_back({ElementOrigin::Kind::Member, q, j, c, -1});
            }
            layout.members[q].push_back(std::move(member));
        }

    // No members, no witnesses: the empty truncation is the base alone.
    layout.per_q_witness.assign(nlabels, {});
    if (t > 0) {
        for (int q = 0; q < nlabels; ++q)
            for (std::size_t s = 0; s < slots.per_q_ids.size(); ++s) {
                layout.per_q_witness[q].push_back(next);
                layout.origins.push_back({ElementOrigin::Kind::Witness, q, -1, static_cast<int>(s), -1});
                ++next;
            }
        for (int q = 0; q < nlabels; ++q)
            for (int r = q + 1; r < nlabels; ++r)
                for (std::size_t s = 0; s < slots.per_pair_ids.size(); ++s) {
                    layout.per_pair_witness[{q, r}].push_back(next);
                    layout.origins.push_back({ElementOrigin::Kind::Witness, q, -1, static_cast<int>(s), r});
                    ++next;
                }
    }

    int rel = g.sig.index_of(g.relation);
    bool member_scoped = false, pair_scoped = false;
    for (const WitnessEntry& e : g.witness_entries) {
        member_scoped |= e.kind == WitnessEntry::Kind::MemberCoord;
        pair_scoped |= e.kind == WitnessEntry::Kind::FreshPerPair;
    }

    std::vector<Fact> facts = g.base.all_facts();
    for (int q = 0; q < nlabels; ++q) {
        const auto& members = layout.members[q];
        for (const Tuple& m : members) {
            for (const FamilyFact& ff : g.clique_internal)
                facts.push_back({ff.rel, instantiate_entries(ff.entries, &m, nullptr, nullptr)});
            for (const FamilyFact& ff : g.clique_base)
                facts.push_back({ff.rel, instantiate_entries(ff.entries, &m, nullptr, nullptr)});
        }
        for (std::size_t j1 = 0; j1 < members.size(); ++j1)
            for (std::size_t j2 = 0; j2 < members.size(); ++j2) {
                if (j1 == j2)
                    continue;
                for (const FamilyFact& ff : g.clique_cross)
                    facts.push_back({ff.rel, instantiate_entries(ff.entries, nullptr, &members[j1], &members[j2])});
            }
    }

    auto witness_tuple = [&](int q, int r, int member_j) {
        Tuple d;
        d.reserve(g.witness_entries.size());
        for (const WitnessEntry& e : g.witness_entries) {
            switch (e.kind) {
            case WitnessEntry::Kind::Base:
                d.push_back(e.value);
                break;
            case WitnessEntry::Kind::MemberCoord:
                d.push_back(layout.members[q][member_j][e.value]);
                break;
            case WitnessEntry::Kind::FreshPerQ:
                d.push_back(layout.per_q_witness[q][slots.per_q_index(e.value)]);
                break;
            case WitnessEntry::Kind::FreshPerPair:
                d.push_back(layout.per_pair_witness.at({q, r})[slots.per_pair_index(e.value)]);
                break;
            }
        }
        return d;
    };

    auto emit_links = [&](int q, int r) {
        int member_range = member_scoped ? t : 1;
        for (int j = 0; j < member_range; ++j) {
            Tuple d = witness_tuple(q, r, j);
            for (const Tuple& m : layout.members[q])
                facts.push_back({rel, tuple_concat(m, d)});
        }
    };
    if (pair_scoped) {
        for (int q = 0; q < nlabels; ++q)
            for (int r = q + 1; r < nlabels; ++r)
                emit_links(q, r);
    } else if (t > 0) {
        // Witnesses depend only on the low label; every label gets its links,
        // mirroring that every rational has a larger one.
        for (int q = 0; q < nlabels; ++q)
            emit_links(q, std::min(q + 1, nlabels - 1));
    }

    auto witness_fact_tuple = [&](const FamilyFact& ff, int q, int r) {
        Tuple out;
        out.reserve(ff.entries.size());
        for (const PatEntry& e : ff.entries) {
            if (e.kind == PatEntry::Kind::Base) {
                out.push_back(e.value);
            } else {
                int idx = slots.per_q_index(e.value);
                if (idx >= 0)
                    out.push_back(layout.per_q_witness[q][idx]);
                else
                    out.push_back(layout.per_pair_witness.at({q, r})[slots.per_pair_index(e.value)]);
            }
        }
        return out;
    };
    if (t > 0)
        for (const FamilyFact& ff : g.witness_facts) {
            bool uses_pair = std::any_of(ff.entries.begin(), ff.entries.end(), [&](const PatEntry& e) {
                return e.kind == PatEntry::Kind::Slot && slots.per_pair_index(e.value) >= 0;
            });
            if (uses_pair) {
                for (int q = 0; q < nlabels; ++q)
                    for (int r = q + 1; r < nlabels; ++r)
                        facts.push_back({ff.rel, witness_fact_tuple(ff, q, r)});
            } else {
                for (int q = 0; q < nlabels; ++q)
                    facts.push_back({ff.rel, witness_fact_tuple(ff, q, -1)});
            }
        }

    return {Structure(g.base.signature_ptr(), next, std::move(facts)), std::move(layout)};
}

Truncation instantiate_chain(const ComponentChainSpec& c, int t)
{
    Structure out(std::make_shared<const Signature>(c.sig), 0, {});
    for (const Structure& s : c.background)
        out = disjoint_union(out, s);
    int upto = std::min<int>(static_cast<int>(c.chain.size()), t);
    for (int i = 0; i < upto; ++i)
        out = disjoint_union(out, c.chain[i]);
    TruncationLayout layout;
    layout.origins.assign(out.size(), {ElementOrigin::Kind::Base, -1, -1, -1, -1});
    return {std::move(out), std::move(layout)};
}

} // namespace

Truncation instantiate(const Presentation& p, int t)
{
    if (t < 0)
        throw InputError("truncate: t must be nonnegative");
    switch (p.kind()) {
    case Presentation::Kind::Cellular:
        return instantiate_cellular(p.cellular(), t);
    case Presentation::Kind::Grid:
        return instantiate_grid(p.grid(), t);
    default:
        return instantiate_chain(p.chain(), t);
    }
}

Structure truncate(const Presentation& p, int t)
{
    return instantiate(p, t).structure;
}

ValidationReport check_blockwise_symmetries(const Structure& s, const TruncationLayout& layout, int threads)
{
    struct Job {
        int family;
        int j1;
        int j2;
    };
    std::vector<Job> jobs;
    for (std::size_t fi = 0; fi < layout.members.size(); ++fi) {
        int count = static_cast<int>(layout.members[fi].size());
        for (int j1 = 0; j1 < count; ++j1)
            for (int j2 = j1 + 1; j2 < count; ++j2)
                jobs.push_back({static_cast<int>(fi), j1, j2});
    }

    std::vector<std::optional<ValidationIssue>> results(jobs.size());
    auto run_job = [&](std::size_t i) {
        const Job& job = jobs[i];
        const auto& members = layout.members[job.family];
        std::vector<int> map(s.size());
        std::iota(map.begin(), map.end(), 0);
        for (std::size_t c = 0; c < members[job.j1].size(); ++c) {
            map[members[job.j1][c]] = members[job.j2][c];
            map[members[job.j2][c]] = members[job.j1][c];
        }
        if (auto bad = automorphism_violation(s, map))
            results[i] = ValidationIssue{"family " + std::to_string(job.family) + " transposition ("
                    + std::to_string(job.j1) + " " + std::to_string(job.j2) + ")",
                "fact " + fact_to_string(s.signature(), bad->rel, bad->args) + " not preserved"};
    };

    if (threads <= 1 || jobs.size() < 2) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            run_job(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        int nthreads = std::min<int>(threads, static_cast<int>(jobs.size()));
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = cursor.fetch_add(1); i < jobs.size(); i = cursor.fetch_add(1))
                    run_job(i);
            });
        for (std::thread& th : pool)
            th.join();
    }

    ValidationReport report;
    for (const auto& issue : results)
        if (issue) {
            report.valid = false;
            report.issues.push_back(*issue);
        }
    return report;
}

namespace {

void merge_report(ValidationReport& into, ValidationReport from)
{
    into.valid = into.valid && from.valid;
    for (auto& issue : from.issues)
        into.issues.push_back(std::move(issue));
}

ValidationReport validate_grid_conditions(const GridPresentation& g, const Truncation& inst)
{
    ValidationReport report;
    const Structure& s = inst.structure;
    int rel = g.sig.index_of(g.relation);
    bool member_scoped = false;
    for (const WitnessEntry& e : g.witness_entries)
        member_scoped |= e.kind == WitnessEntry::Kind::MemberCoord;

    GridSlots slots = grid_slots(g);
    int nlabels = static_cast<int>(g.labels.size());
    for (int q = 0; q < nlabels; ++q)
        for (int r = q + 1; r < nlabels; ++r) {
            // Canonical witness instance for the pair.
            Tuple d;
            for (const WitnessEntry& e : g.witness_entries) {
                switch (e.kind) {
                case WitnessEntry::Kind::Base:
                    d.push_back(e.value);
                    break;
                case WitnessEntry::Kind::MemberCoord:
                    d.push_back(inst.layout.members[q][0][e.value]);
                    break;
                case WitnessEntry::Kind::FreshPerQ:
                    d.push_back(inst.layout.per_q_witness[q][slots.per_q_index(e.value)]);
                    break;
                case WitnessEntry::Kind::FreshPerPair:
                    d.push_back(inst.layout.per_pair_witness.at({q, r})[slots.per_pair_index(e.value)]);
                    break;
                }
            }
            (void)member_scoped;
            for (const Tuple& m : inst.layout.members[q])
                if (!s.has_fact(rel, tuple_concat(m, d))) {
                    report.valid = false;
                    report.issues.push_back({"grid pair (" + g.labels[q] + "," + g.labels[r] + ")",
                        "missing link fact " + fact_to_string(g.sig, rel, tuple_concat(m, d))});
                }
            for (const Tuple& m : inst.layout.members[r])
                if (s.has_fact(rel, tuple_concat(m, d))) {
                    report.valid = false;
                    report.issues.push_back({"grid pair (" + g.labels[q] + "," + g.labels[r] + ")",
                        "forbidden link fact " + fact_to_string(g.sig, rel, tuple_concat(m, d)) + " present"});
                }
        }

    // Order-automorphisms of the finite chain D: the identity is the only
    // monotone bijection; its induced map is trivially checked.
    {
        std::vector<int> id(s.size());
        std::iota(id.begin(), id.end(), 0);
        if (auto bad = automorphism_violation(s, id)) {
            report.valid = false;
            report.issues.push_back({"identity order-automorphism",
                "fact " + fact_to_string(s.signature(), bad->rel, bad->args) + " not preserved"});
        }
    }
    return report;
}

ValidationReport validate_chain_spec(const ComponentChainSpec& c)
{
    ValidationReport report;
    for (std::size_t i = 0; i < c.chain.size(); ++i) {
        if (ma_components(c.chain[i]).size() != 1) {
            report.valid = false;
            report.issues.push_back({"chain component " + std::to_string(i), "not connected"});
        }
    }
    for (std::size_t i = 0; i + 1 < c.chain.size(); ++i) {
        if (!find_embedding(c.chain[i], c.chain[i + 1])) {
            report.valid = false;
            report.issues.push_back(
                {"chain step " + std::to_string(i), "C_" + std::to_string(i) + " does not embed into the next"});
        }
        if (find_embedding(c.chain[i + 1], c.chain[i])) {
            report.valid = false;
            report.issues.push_back({"chain step " + std::to_string(i),
                "C_" + std::to_string(i + 1) + " embeds backwards into C_" + std::to_string(i)});
        }
    }
    for (std::size_t z = 0; z < c.background.size(); ++z) {
        for (std::size_t i = 0; i < c.chain.size(); ++i)
            if (c.background[z].size() == c.chain[i].size() && is_isomorphic(c.background[z], c.chain[i])) {
                report.valid = false;
                report.issues.push_back({"background component " + std::to_string(z),
                    "isomorphic to chain component " + std::to_string(i)});
            }
    }
    return report;
}

} // namespace

ValidationReport validate(const Presentation& p, int t, int threads)
{
    if (t < 3)
        throw InputError("validate: t must be at least 3");
    switch (p.kind()) {
    case Presentation::Kind::Cellular: {
        Truncation inst = instantiate_cellular(p.cellular(), t);
        return check_blockwise_symmetries(inst.structure, inst.layout, threads);
    }
    case Presentation::Kind::Grid: {
        Truncation inst = instantiate_grid(p.grid(), t);
        ValidationReport report = check_blockwise_symmetries(inst.structure, inst.layout, threads);
        merge_report(report, validate_grid_conditions(p.grid(), inst));
        return report;
    }
    default:
        return validate_chain_spec(p.chain());
    }
}

bool is_finitely_partitioned(const CellularPresentation& p)
{
    for (const Family& f : p.families)
        if (f.k != 1)
            return false;
    return true;
}

std::string to_string(SiblingCount c)
{
    switch (c) {
    case SiblingCount::One:
        return "ONE";
    case SiblingCount::Aleph0:
        return "ALEPH0";
    default:
        return "CONTINUUM";
    }
}

SiblingVerdict classify(const Presentation& p)
{
    switch (p.kind()) {
    case Presentation::Kind::Cellular:
        if (is_finitely_partitioned(p.cellular()))
            return {SiblingCount::One, "finitely partitioned: cellular with every family of tuple length 1"};
        return {SiblingCount::Aleph0, "cellular with a family of tuple length at least 2"};
    case Presentation::Kind::Grid:
        return {SiblingCount::Continuum, "grid presentation: densely ordered family system, not cellular"};
    default:
        return {SiblingCount::Continuum, "strictly increasing component chain, not cellular"};
    }
}

namespace {

// (family index, position bitmask) of the first splittable family, if any.
std::optional<std::pair<int, unsigned>> find_separation_offender(const CellularPresentation& p, int t)
{
    Truncation inst = instantiate_cellular(p, t);
    for (std::size_t fi = 0; fi < p.families.size(); ++fi) {
        const Family& f = p.families[fi];
        if (!f.infinite() || f.k < 2)
            continue;
        const auto& members = inst.layout.members[fi];
        for (unsigned mask = 1; mask + 1 < (1u << f.k); ++mask) {
            std::vector<Tuple> subtuples;
            for (const Tuple& m : members) {
                Tuple sub;
                for (int c = 0; c < f.k; ++c)
                    if (mask & (1u << c))
                        sub.push_back(m[c]);
                subtuples.push_back(std::move(sub));
            }
            bool clique = true;
            for (std::size_t i = 0; i < subtuples.size() && clique; ++i)
                for (std::size_t j = i + 1; j < subtuples.size() && clique; ++j)
                    if (!exchangeable(inst.structure, subtuples[i], subtuples[j]))
                        clique = false;
            if (clique)
                return {{static_cast<int>(fi), mask}};
        }
    }
    return std::nullopt;
}

std::string fresh_family_name(const CellularPresentation& p, const std::string& stem)
{
    for (int suffix = 0;; ++suffix) {
        std::string name = stem + "." + std::to_string(suffix);
        bool taken = std::any_of(p.families.begin(), p.families.end(),
            [&](const Family& f) { return f.name == name; });
        if (!taken)
            return name;
    }
}

CellularPresentation split_family(const CellularPresentation& p, int fi, unsigned mask)
{
    const Family& f = p.families[fi];
    std::vector<int> side(f.k), local(f.k);
    int ka = 0, kb = 0;
    for (int c = 0; c < f.k; ++c) {
        if (mask & (1u << c)) {
            side[c] = 0;
            local[c] = ka++;
        } else {
            side[c] = 1;
            local[c] = kb++;
        }
    }

    CellularPresentation out = p;
    Family fa, fb;
    fa.name = fresh_family_name(out, f.name);
    fa.k = ka;
    fa.count = f.count;
    fb.k = kb;
    fb.count = f.count;
    {
        // Reserve fa's name before deriving fb's so they never collide.
        CellularPresentation probe = out;
        probe.families.push_back(fa);
        fb.name = fresh_family_name(probe, f.name);
    }

    auto classify_pos = [&](const FamilyFact& ff) {
        bool a = false, b = false;
        for (const PatEntry& e : ff.entries)
            if (e.kind == PatEntry::Kind::Pos)
                (side[e.value] == 0 ? a : b) = true;
        return std::pair<bool, bool>{a, b};
    };

    CrossFamilyBlock a_to_b{fb.name, {}};
    auto renumber_pos = [&](const FamilyFact& ff) {
        FamilyFact g = ff;
        for (PatEntry& e : g.entries)
            if (e.kind == PatEntry::Kind::Pos)
                e.value = local[e.value];
        return g;
    };
    auto to_cross_family = [&](const FamilyFact& ff) {
        FamilyFact g;
        g.rel = ff.rel;
        for (const PatEntry& e : ff.entries) {
            if (e.kind == PatEntry::Kind::Pos)
                g.entries.push_back({side[e.value] == 0 ? PatEntry::Kind::First : PatEntry::Kind::Second,
                    local[e.value]});
            else
                g.entries.push_back(e);
        }
        return g;
    };

    for (const FamilyFact& ff : f.internal_facts) {
        auto [a, b] = classify_pos(ff);
        if (a && b)
            a_to_b.facts.push_back(to_cross_family(ff));
        else if (a)
            fa.internal_facts.push_back(renumber_pos(ff));
        else
            fb.internal_facts.push_back(renumber_pos(ff));
    }
    for (const FamilyFact& ff : f.base_facts) {
        auto [a, b] = classify_pos(ff);
        if (a && b)
            a_to_b.facts.push_back(to_cross_family(ff));
        else if (a)
            fa.base_facts.push_back(renumber_pos(ff));
        else
            fb.base_facts.push_back(renumber_pos(ff));
    }

    CrossFamilyBlock b_to_a{fa.name, {}};
    for (const FamilyFact& ff : f.cross_facts) {
        bool fa_first = false, fb_first = false, fa_second = false, fb_second = false;
        for (const PatEntry& e : ff.entries) {
            if (e.kind == PatEntry::Kind::First)
                (side[e.value] == 0 ? fa_first : fb_first) = true;
            if (e.kind == PatEntry::Kind::Second)
                (side[e.value] == 0 ? fa_second : fb_second) = true;
        }
        int groups = int(fa_first) + int(fb_first) + int(fa_second) + int(fb_second);
        auto renumber_cross = [&](const FamilyFact& in) {
            FamilyFact g = in;
            for (PatEntry& e : g.entries)
                if (e.kind == PatEntry::Kind::First || e.kind == PatEntry::Kind::Second)
                    e.value = local[e.value];
            return g;
        };
        if (groups > 2)
            throw InputError("separate: splitting would need a pattern spanning three member tuples");
        if (fa_first && fa_second)
            fa.cross_facts.push_back(renumber_cross(ff));
        else if (fb_first && fb_second)
            fb.cross_facts.push_back(renumber_cross(ff));
        else if (fa_first && fb_second) {
            FamilyFact g = renumber_cross(ff); // First stays first (fa), Second stays second (fb)
            a_to_b.facts.push_back(g);
        } else if (fb_first && fa_second) {
            FamilyFact g = renumber_cross(ff);
            b_to_a.facts.push_back(g);
        }
    }

    // Cross-family blocks owned by f distribute by the side their First
    // entries touch; blocks elsewhere pointing at f distribute by Second.
    for (const CrossFamilyBlock& blk : f.cross_family_facts) {
        CrossFamilyBlock na{blk.other, {}}, nb{blk.other, {}};
        for (const FamilyFact& ff : blk.facts) {
            bool a = false, b = false;
            for (const PatEntry& e : ff.entries)
                if (e.kind == PatEntry::Kind::First)
                    (side[e.value] == 0 ? a : b) = true;
            if (a && b)
                throw InputError("separate: splitting would need a pattern spanning three member tuples");
            FamilyFact g = ff;
            for (PatEntry& e : g.entries)
                if (e.kind == PatEntry::Kind::First)
                    e.value = local[e.value];
            (a ? na : nb).facts.push_back(std::move(g));
        }
        if (!na.facts.empty())
            fa.cross_family_facts.push_back(std::move(na));
        if (!nb.facts.empty())
            fb.cross_family_facts.push_back(std::move(nb));
    }
    if (!a_to_b.facts.empty())
        fa.cross_family_facts.push_back(std::move(a_to_b));
    if (!b_to_a.facts.empty())
        fb.cross_family_facts.push_back(std::move(b_to_a));

    for (Family& g : out.families) {
        if (g.name == f.name)
            continue;
        std::vector<CrossFamilyBlock> rebuilt;
        for (CrossFamilyBlock& blk : g.cross_family_facts) {
            if (blk.other != f.name) {
                rebuilt.push_back(std::move(blk));
                continue;
            }
            CrossFamilyBlock na{fa.name, {}}, nb{fb.name, {}};
            for (const FamilyFact& ff : blk.facts) {
                bool a = false, b = false;
                for (const PatEntry& e : ff.entries)
                    if (e.kind == PatEntry::Kind::Second)
                        (side[e.value] == 0 ? a : b) = true;
                if (a && b)
                    throw InputError("separate: splitting would need a pattern spanning three member tuples");
                FamilyFact gg = ff;
                for (PatEntry& e : gg.entries)
                    if (e.kind == PatEntry::Kind::Second)
                        e.value = local[e.value];
                (a ? na : nb).facts.push_back(std::move(gg));
            }
            if (!na.facts.empty())
                rebuilt.push_back(std::move(na));
            if (!nb.facts.empty())
                rebuilt.push_back(std::move(nb));
        }
        g.cross_family_facts = std::move(rebuilt);
    }

    out.families[fi] = std::move(fa);
    out.families.insert(out.families.begin() + fi + 1, std::move(fb));
    return out;
}

} // namespace

CellularPresentation separate(const CellularPresentation& p, int t)
{
    int maxk = 0;
    for (const Family& f : p.families)
        maxk = std::max(maxk, f.k);
    if (t <= 2 * maxk + p.sig.max_arity())
        throw InputError("separate: t must exceed 2*max(k_i) + max arity");

    CellularPresentation cur = p;
    while (auto offender = find_separation_offender(cur, t))
        cur = split_family(cur, offender->first, offender->second);

    Presentation out(cur);
    ValidationReport report = validate(out, t);
    if (!report.valid)
        throw std::logic_error("separate: split presentation failed validation");
    return cur;
}

Structure generate_nf(const GridPresentation& g, const std::map<std::string, int>& cuts, int t)
{
    check_grid(g);
    int r = g.sig.max_arity();
    std::set<int> values;
    for (const auto& [label, size] : cuts) {
        if (std::find(g.labels.begin(), g.labels.end(), label) == g.labels.end())
            throw InputError("generate_nf: unknown label '" + label + "'");
        if (size <= 2 * g.k + r)
            throw InputError("generate_nf: cut sizes must exceed 2k + max arity = "
                + std::to_string(2 * g.k + r));
        if (!values.insert(size).second)
            throw InputError("generate_nf: cut sizes must be distinct");
        if (size >= t)
            throw InputError("generate_nf: t must exceed every cut size");
    }

    Truncation inst = instantiate_grid(g, t);
    std::vector<char> keep(inst.structure.size(), 1);
    for (std::size_t q = 0; q < g.labels.size(); ++q) {
        auto it = cuts.find(g.labels[q]);
        if (it == cuts.end())
            continue;
        for (int j = it->second; j < t; ++j)
            for (int e : inst.layout.members[q][j])
                keep[e] = 0;
    }
    std::vector<int> kept;
    std::vector<int> to_new(inst.structure.size(), -1);
    for (int e = 0; e < inst.structure.size(); ++e)
        if (keep[e]) {
            to_new[e] = static_cast<int>(kept.size());
            kept.push_back(e);
        }
    Structure out = induced_substructure(inst.structure, kept);

    // The finite shadow of the distinguisher: the maximal-clique size census
    // over the surviving member tuples equals the cut sizes plus t per uncut
    // label.
    std::vector<Tuple> pool;
    std::vector<int> expected;
    for (std::size_t q = 0; q < g.labels.size(); ++q) {
        auto it = cuts.find(g.labels[q]);
        int surviving = it == cuts.end() ? t : it->second;
        expected.push_back(surviving);
        for (int j = 0; j < surviving; ++j) {
            Tuple m = inst.layout.members[q][j];
            for (int& e : m)
                e = to_new[e];
            pool.push_back(std::move(m));
        }
    }
    std::sort(expected.begin(), expected.end());
    CliqueEnumOptions opts;
    opts.pool = pool;
    std::vector<int> census = clique_size_census(out, g.k, opts);
    if (census != expected)
        throw std::logic_error("generate_nf: family clique census does not match the cut sizes");
    return out;
}

MstarResult generate_mstar_ell(const CellularPresentation& p, int family_index, int ell, int t)
{
    if (family_index < 0 || family_index >= static_cast<int>(p.families.size()))
        throw InputError("generate_mstar_ell: family index out of range");
    const Family& f = p.families[family_index];
    if (f.k < 2)
        throw InputError("generate_mstar_ell: family must have tuple length at least 2");
    if (!f.infinite())
        throw InputError("generate_mstar_ell: family must be infinite");
    if (ell < 0 || ell >= t)
        throw InputError("generate_mstar_ell: require 0 <= ell < t");
    {
        Presentation pres(p);
        if (!validate(pres, std::max(3, std::min(t, 5))).valid)
            throw InputError("generate_mstar_ell: presentation does not validate");
    }
    if (find_separation_offender(p, t))
        throw InputError("generate_mstar_ell: presentation is not separated at this size");

    Truncation inst = instantiate_cellular(p, t);
    std::vector<char> keep(inst.structure.size(), 1);
    for (int j = 0; j <= ell; ++j) {
        const Tuple& member = inst.layout.members[family_index][j];
        for (int c = 1; c < f.k; ++c)
            keep[member[c]] = 0;
    }
    std::vector<int> kept1;
    for (int e = 0; e < inst.structure.size(); ++e)
        if (keep[e])
            kept1.push_back(e);
    Structure candidate = induced_substructure(inst.structure, kept1);
    std::vector<int> to_cand(inst.structure.size(), -1);
    for (std::size_t i = 0; i < kept1.size(); ++i)
        to_cand[kept1[i]] = static_cast<int>(i);

    std::vector<Tuple> stranded;
    for (int j = 0; j <= ell; ++j)
        stranded.push_back({to_cand[inst.layout.members[family_index][j][0]]});

    // One simultaneous pass: drop every singleton family whose members absorb
    // the stranded elements into a single clique.
    std::vector<int> dropped_families;
    for (std::size_t gi = 0; gi < p.families.size(); ++gi) {
        if (static_cast<int>(gi) == family_index || p.families[gi].k != 1)
            continue;
        std::vector<Tuple> group = stranded;
        for (const Tuple& m : inst.layout.members[gi])
            group.push_back({to_cand[m[0]]});
        bool clique = true;
        for (std::size_t i = 0; i < group.size() && clique; ++i)
            for (std::size_t j = i + 1; j < group.size() && clique; ++j)
                if (!exchangeable(candidate, group[i], group[j]))
                    clique = false;
        if (clique)
            dropped_families.push_back(static_cast<int>(gi));
    }
    for (int gi : dropped_families)
        for (const Tuple& m : inst.layout.members[gi])
            for (int e : m)
                keep[e] = 0;

    std::vector<int> kept2;
    std::vector<int> to_final(inst.structure.size(), -1);
    for (int e = 0; e < inst.structure.size(); ++e)
        if (keep[e]) {
            to_final[e] = static_cast<int>(kept2.size());
            kept2.push_back(e);
        }
    Structure out = induced_substructure(inst.structure, kept2);

    // Elements of surviving infinite singleton families stand in for infinite
    // cliques and are excluded from the finite census.
    std::vector<char> infinite_standin(out.size(), 0);
    for (std::size_t gi = 0; gi < p.families.size(); ++gi) {
        if (static_cast<int>(gi) == family_index || p.families[gi].k != 1 || !p.families[gi].infinite())
            continue;
        if (std::find(dropped_families.begin(), dropped_families.end(), static_cast<int>(gi))
            != dropped_families.end())
            continue;
        for (const Tuple& m : inst.layout.members[gi])
            infinite_standin[to_final[m[0]]] = 1;
    }

    int largest = 0;
    for (const KClique& c : enumerate_maximal_kcliques(out, 1)) {
        bool finite = true;
        for (int e : c.carrier())
            if (infinite_standin[e]) {
                finite = false;
                break;
            }
        if (finite)
            largest = std::max(largest, c.size());
    }

    if (ell > p.base.size()) {
        if (largest < ell || largest > p.base.size() + ell + 1)
            throw std::logic_error("generate_mstar_ell: largest finite 1-clique size "
                + std::to_string(largest) + " outside [" + std::to_string(ell) + ", "
                + std::to_string(p.base.size() + ell + 1) + "]");
    }
    return {std::move(out), largest};
}

Structure generate_ns(const ComponentChainSpec& c, const std::vector<int>& s, int t)
{
    check_chain(c);
    ValidationReport chain_report = validate_chain_spec(c);
    if (!chain_report.valid)
        throw InputError("generate_ns: chain spec does not validate");
    int m = static_cast<int>(c.chain.size()) - 1;
    std::vector<int> sel = s;
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    for (int i : sel)
        if (i < 0 || i > m)
            throw InputError("generate_ns: index " + std::to_string(i) + " outside the chain");

    Structure out(std::make_shared<const Signature>(c.sig), 0, {});
    for (const Structure& z : c.background)
        out = disjoint_union(out, z);
    for (int i : sel)
        if (i <= t)
            out = disjoint_union(out, c.chain[i]);

    // Distinguisher: the component census contains C_i's class iff i was
    // selected (within the truncation bound).
    std::vector<ComponentClass> census = component_census(out);
    for (int i = 0; i <= m; ++i) {
        bool expected = std::binary_search(sel.begin(), sel.end(), i) && i <= t;
        bool present = false;
        for (const ComponentClass& cc : census)
            if (cc.representative.size() == c.chain[i].size() && is_isomorphic(cc.representative, c.chain[i])) {
                present = true;
                break;
            }
        if (present != expected)
            throw std::logic_error("generate_ns: component census disagrees with the selected set at index "
                + std::to_string(i));
    }
    return out;
}

MaTrend ma_trend(const Presentation& p, const std::string& relation, int t_lo, int t_hi)
{
    if (t_lo < 0 || t_hi < t_lo)
        throw InputError("ma_trend: bad t range");
    if (p.signature().index_of(relation) < 0)
        throw InputError("ma_trend: unknown relation '" + relation + "'");
    MaTrend out;
    for (int t = t_lo; t <= t_hi; ++t)
        out.values.push_back({t, ma_bound(truncate(p, t), relation)});
    std::size_t half_start = out.values.size() / 2;
    out.bounded = true;
    for (std::size_t i = half_start + 1; i < out.values.size(); ++i)
        if (out.values[i].second != out.values[half_start].second)
            out.bounded = false;
    return out;
}

GridPresentation builtin_rank0_grid(int k, const std::vector<std::string>& labels)
{
    if (k < 1)
        throw InputError("builtin_rank0_grid: k must be at least 1");
    GridPresentation g;
    if (k == 1) {
        g.sig = Signature({{"E", 2}});
        g.relation = "E";
    } else {
        g.sig = Signature({{"S", 2}, {"R", k + 1}});
        g.relation = "R";
        int s_rel = g.sig.index_of("S");
        for (int c = 0; c + 1 < k; ++c)
            g.clique_internal.push_back({s_rel, {{PatEntry::Kind::Pos, c}, {PatEntry::Kind::Pos, c + 1}}});
    }
    g.base = Structure(std::make_shared<const Signature>(g.sig), 0, {});
    g.k = k;
    g.labels = labels;
    g.witness_entries = {{WitnessEntry::Kind::MemberCoord, 0}};
    return g;
}

GridPresentation builtin_rank1_grid(int k, const std::vector<std::string>& labels)
{
    if (k < 1)
        throw InputError("builtin_rank1_grid: k must be at least 1");
    GridPresentation g;
    g.sig = Signature({{"U", 1}, {"V", 1}, {"R", k + 1}});
    g.base = Structure(std::make_shared<const Signature>(g.sig), 0, {});
    g.k = k;
    g.relation = "R";
    g.labels = labels;
    int u_rel = g.sig.index_of("U");
    for (int c = 0; c < k; ++c)
        g.clique_internal.push_back({u_rel, {{PatEntry::Kind::Pos, c}}});
    g.witness_entries = {{WitnessEntry::Kind::FreshPerQ, 0}};
    g.witness_facts.push_back({g.sig.index_of("V"), {{PatEntry::Kind::Slot, 0}}});
    return g;
}

// ---------------------------------------------------------------------------
// JSON (schema documented in docs/presentation-format.md)

namespace {

json structure_to_json(const Structure& s)
{
    json facts = json::array();
    for (int r = 0; r < s.signature().relation_count(); ++r)
        for (const Tuple& t : s.facts(r))
            facts.push_back({{"rel", s.signature().relation(r).name}, {"args", t}});
    return {{"size", s.size()}, {"facts", facts}};
}

Structure structure_from_json(const json& j, const std::shared_ptr<const Signature>& sig)
{
    if (!j.is_object() || !j.contains("size"))
        throw InputError("presentation: structure object needs a 'size'");
    std::vector<Fact> facts;
    if (j.contains("facts"))
        for (const json& jf : j.at("facts")) {
            int rel = sig->index_of(jf.at("rel").get<std::string>());
            if (rel < 0)
                throw InputError("presentation: fact uses unknown relation");
            facts.push_back({rel, jf.at("args").get<Tuple>()});
        }
    return Structure(sig, j.at("size").get<int>(), std::move(facts));
}

json pat_entry_to_json(const PatEntry& e)
{
    switch (e.kind) {
    case PatEntry::Kind::Base:
        return {{"base", e.value}};
    case PatEntry::Kind::Pos:
        return {{"pos", e.value}};
    case PatEntry::Kind::First:
        return {{"first", e.value}};
    case PatEntry::Kind::Second:
        return {{"second", e.value}};
    default:
        return {{"slot", e.value}};
    }
}

PatEntry pat_entry_from_json(const json& j)
{
    if (!j.is_object() || j.size() != 1)
        throw InputError("presentation: pattern entry must be a single-key object");
    if (j.contains("base"))
        return {PatEntry::Kind::Base, j.at("base").get<int>()};
    if (j.contains("pos"))
        return {PatEntry::Kind::Pos, j.at("pos").get<int>()};
    if (j.contains("first"))
        return {PatEntry::Kind::First, j.at("first").get<int>()};
    if (j.contains("second"))
        return {PatEntry::Kind::Second, j.at("second").get<int>()};
    if (j.contains("slot"))
        return {PatEntry::Kind::Slot, j.at("slot").get<int>()};
    throw InputError("presentation: unknown pattern entry key");
}

json family_fact_to_json(const Signature& sig, const FamilyFact& ff)
{
    json args = json::array();
    for (const PatEntry& e : ff.entries)
        args.push_back(pat_entry_to_json(e));
    return {{"rel", sig.relation(ff.rel).name}, {"args", args}};
}

FamilyFact family_fact_from_json(const Signature& sig, const json& j)
{
    FamilyFact ff;
    ff.rel = sig.index_of(j.at("rel").get<std::string>());
    if (ff.rel < 0)
        throw InputError("presentation: pattern uses unknown relation '" + j.at("rel").get<std::string>() + "'");
    for (const json& je : j.at("args"))
        ff.entries.push_back(pat_entry_from_json(je));
    return ff;
}

std::vector<FamilyFact> fact_list_from_json(const Signature& sig, const json& j, const char* key)
{
    std::vector<FamilyFact> out;
    if (j.contains(key))
        for (const json& jf : j.at(key))
            out.push_back(family_fact_from_json(sig, jf));
    return out;
}

json fact_list_to_json(const Signature& sig, const std::vector<FamilyFact>& facts)
{
    json out = json::array();
    for (const FamilyFact& ff : facts)
        out.push_back(family_fact_to_json(sig, ff));
    return out;
}

Signature signature_from_json(const json& j)
{
    std::vector<Relation> rels;
    for (const json& jr : j)
        rels.push_back({jr.at("name").get<std::string>(), jr.at("arity").get<int>()});
    return Signature(std::move(rels));
}

json signature_to_json(const Signature& sig)
{
    json out = json::array();
    for (const Relation& r : sig.relations())
        out.push_back({{"name", r.name}, {"arity", r.arity}});
    return out;
}

json witness_entry_to_json(const WitnessEntry& e)
{
    switch (e.kind) {
    case WitnessEntry::Kind::Base:
        return {{"base", e.value}};
    case WitnessEntry::Kind::MemberCoord:
        return {{"member", e.value}};
    case WitnessEntry::Kind::FreshPerQ:
        return {{"fresh_per_q", e.value}};
    default:
        return {{"fresh_per_pair", e.value}};
    }
}

WitnessEntry witness_entry_from_json(const json& j)
{
    if (!j.is_object() || j.size() != 1)
        throw InputError("presentation: witness entry must be a single-key object");
    if (j.contains("base"))
        return {WitnessEntry::Kind::Base, j.at("base").get<int>()};
    if (j.contains("member"))
        return {WitnessEntry::Kind::MemberCoord, j.at("member").get<int>()};
    if (j.contains("fresh_per_q"))
        return {WitnessEntry::Kind::FreshPerQ, j.at("fresh_per_q").get<int>()};
    if (j.contains("fresh_per_pair"))
        return {WitnessEntry::Kind::FreshPerPair, j.at("fresh_per_pair").get<int>()};
    throw InputError("presentation: unknown witness entry key");
}

} // namespace

Presentation Presentation::from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("presentation: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version"))
        throw InputError("presentation: missing schema_version");
    if (j.at("schema_version").get<int>() != 1)
        throw InputError("presentation: unsupported schema_version");
    if (!j.contains("kind") || !j.contains("signature"))
        throw InputError("presentation: missing kind or signature");

    Signature sig = signature_from_json(j.at("signature"));
    auto sig_ptr = std::make_shared<const Signature>(sig);
    std::string kind = j.at("kind").get<std::string>();
    std::string metadata = j.contains("metadata") ? j.at("metadata").dump() : "";

    if (kind == "cellular") {
        CellularPresentation p;
        p.sig = sig;
        p.base = j.contains("base") ? structure_from_json(j.at("base"), sig_ptr)
                                    : Structure(sig_ptr, 0, {});
        if (j.contains("families"))
            for (const json& jf : j.at("families")) {
                Family f;
                f.name = jf.at("name").get<std::string>();
                f.k = jf.at("k").get<int>();
                const json& count = jf.at("count");
                if (count.is_string()) {
                    if (count.get<std::string>() != "infinite")
                        throw InputError("presentation: family count must be an integer or \"infinite\"");
                } else {
                    f.count = count.get<int>();
                }
                f.internal_facts = fact_list_from_json(sig, jf, "internal_facts");
                f.base_facts = fact_list_from_json(sig, jf, "base_facts");
                f.cross_facts = fact_list_from_json(sig, jf, "cross_facts");
                if (jf.contains("cross_family_facts"))
                    for (const json& jb : jf.at("cross_family_facts")) {
                        CrossFamilyBlock blk;
                        blk.other = jb.at("other").get<std::string>();
                        for (const json& jff : jb.at("facts"))
                            blk.facts.push_back(family_fact_from_json(sig, jff));
                        f.cross_family_facts.push_back(std::move(blk));
                    }
                p.families.push_back(std::move(f));
            }
        p.metadata_json = metadata;
        return Presentation(std::move(p));
    }
    if (kind == "grid") {
        GridPresentation g;
        g.sig = sig;
        g.base = j.contains("base") ? structure_from_json(j.at("base"), sig_ptr)
                                    : Structure(sig_ptr, 0, {});
        g.k = j.at("k").get<int>();
        g.relation = j.at("relation").get<std::string>();
        g.labels = j.at("labels").get<std::vector<std::string>>();
        if (j.contains("clique")) {
            const json& jc = j.at("clique");
            g.clique_internal = fact_list_from_json(sig, jc, "internal_facts");
            g.clique_base = fact_list_from_json(sig, jc, "base_facts");
            g.clique_cross = fact_list_from_json(sig, jc, "cross_facts");
        }
        if (j.contains("witness"))
            for (const json& je : j.at("witness").at("entries"))
                g.witness_entries.push_back(witness_entry_from_json(je));
        g.witness_facts = fact_list_from_json(sig, j, "witness_facts");
        g.metadata_json = metadata;
        return Presentation(std::move(g));
    }
    if (kind == "chain") {
        ComponentChainSpec c;
        c.sig = sig;
        if (j.contains("chain"))
            for (const json& js : j.at("chain"))
                c.chain.push_back(structure_from_json(js, sig_ptr));
        if (j.contains("background"))
            for (const json& js : j.at("background"))
                c.background.push_back(structure_from_json(js, sig_ptr));
        c.metadata_json = metadata;
        return Presentation(std::move(c));
    }
    throw InputError("presentation: unknown kind '" + kind + "'");
}

std::string Presentation::to_json() const
{
    json j;
    j["schema_version"] = 1;
    j["signature"] = signature_to_json(signature());
    std::string metadata;
    switch (kind()) {
    case Kind::Cellular: {
        const CellularPresentation& p = cellular();
        j["kind"] = "cellular";
        j["base"] = structure_to_json(p.base);
        json families = json::array();
        for (const Family& f : p.families) {
            json jf;
            jf["name"] = f.name;
            jf["k"] = f.k;
            if (f.count)
                jf["count"] = *f.count;
            else
                jf["count"] = "infinite";
            jf["internal_facts"] = fact_list_to_json(p.sig, f.internal_facts);
            jf["base_facts"] = fact_list_to_json(p.sig, f.base_facts);
            jf["cross_facts"] = fact_list_to_json(p.sig, f.cross_facts);
            json blocks = json::array();
            for (const CrossFamilyBlock& blk : f.cross_family_facts)
                blocks.push_back({{"other", blk.other}, {"facts", fact_list_to_json(p.sig, blk.facts)}});
            jf["cross_family_facts"] = blocks;
            families.push_back(std::move(jf));
        }
        j["families"] = families;
        metadata = p.metadata_json;
        break;
    }
    case Kind::Grid: {
        const GridPresentation& g = grid();
        j["kind"] = "grid";
        j["base"] = structure_to_json(g.base);
        j["k"] = g.k;
        j["relation"] = g.relation;
        j["labels"] = g.labels;
        j["clique"] = {{"internal_facts", fact_list_to_json(g.sig, g.clique_internal)},
            {"base_facts", fact_list_to_json(g.sig, g.clique_base)},
            {"cross_facts", fact_list_to_json(g.sig, g.clique_cross)}};
        json entries = json::array();
        for (const WitnessEntry& e : g.witness_entries)
            entries.push_back(witness_entry_to_json(e));
        j["witness"] = {{"entries", entries}};
        j["witness_facts"] = fact_list_to_json(g.sig, g.witness_facts);
        metadata = g.metadata_json;
        break;
    }
    case Kind::Chain: {
        const ComponentChainSpec& c = chain();
        j["kind"] = "chain";
        json chain = json::array();
        for (const Structure& s : c.chain)
            chain.push_back(structure_to_json(s));
        j["chain"] = chain;
        json background = json::array();
        for (const Structure& s : c.background)
            background.push_back(structure_to_json(s));
        j["background"] = background;
        metadata = c.metadata_json;
        break;
    }
    }
    if (!metadata.empty())
        j["metadata"] = json::parse(metadata);
    return j.dump(2) + "\n";
}

} // namespace sib
