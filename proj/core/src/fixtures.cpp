#include "aclaudit/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <random>

#include "aclaudit/inheritance.hpp"

namespace aclaudit {

namespace {

const std::string kDomainSid = "S-1-5-21-1-2-3";

Sid domain_sid(int rid) { return Sid::from_string(kDomainSid + "-" + std::to_string(rid)); }

Ace make_ace(AceType type, const Sid& sid, std::uint32_t mask, AceFlags flags) {
    return Ace{type, sid, AccessMask(mask), flags};
}

}  // namespace

Snapshot gen_lab_fixture(FixtureVariant variant) {
    const char* letters = "ABCDEF";
    std::vector<Principal> principals;
    for (int i = 0; i < 6; ++i) {
        const char lower = static_cast<char>('a' + i);
        principals.push_back({domain_sid(1101 + i), std::string("CORUH\\User-") + letters[i], PrincipalKind::User, {},
                              {std::string("CORUH\\user") + lower}});
    }
    const Sid guess = domain_sid(1107);
    principals.push_back({guess, "CORUH\\guess", PrincipalKind::User, {}, {}});
    const Sid sample_group = domain_sid(2001);
    principals.push_back({sample_group, "CORUH\\Sample Group", PrincipalKind::Group, {domain_sid(1102), domain_sid(1103)}, {}});

    const AceFlags inherit{AceFlag::ObjectInherit, AceFlag::ContainerInherit};
    const std::vector<Ace> root_aces = {
        make_ace(AceType::Deny, sample_group, 0x20089, inherit),
        make_ace(AceType::Deny, domain_sid(1103), 0x20089, inherit),
        make_ace(AceType::Allow, well_known::kEveryone, 0x1200A9, inherit),
        make_ace(AceType::Allow, guess, 0x1F01FF, inherit),
        make_ace(AceType::Allow, sample_group, 0x116, inherit),
    };

    Snapshot snapshot;
    snapshot.directory = Directory("CORUH", std::move(principals));
    snapshot.root.path = "C:/Library";
    snapshot.root.sd.dacl.aces = root_aces;

    for (std::size_t i = 0; i < kLibraryFolders.size(); ++i) {
        FolderNode child{"C:/Library/" + std::string(kLibraryFolders[i]), {}, {}};
        if (variant == FixtureVariant::Icacls) {
            const AceFlags inherited{AceFlag::ObjectInherit, AceFlag::ContainerInherit, AceFlag::Inherited};
            for (Ace ace : root_aces) {
                ace.flags = inherited;
                child.sd.dacl.aces.push_back(ace);
            }
            child.sd.dacl.aces.push_back(
                make_ace(AceType::Allow, domain_sid(1101 + static_cast<int>(i % 6)), 0x1F01FF, inherited));
        }
        snapshot.root.children.push_back(std::move(child));
    }
    // Keep the loader's child order.
    std::vector<FolderNode> flat;
    for_each_folder(snapshot.root, [&](const FolderNode& n) { flat.push_back(FolderNode{n.path, n.sd, {}}); });
    snapshot.root = build_folder_tree(std::move(flat));
    return snapshot;
}

void GenParams::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams(std::string(name) + " must be in [0, 1]");
    };
    prob(nesting_probability, "nesting_probability");
    prob(deny_fraction, "deny_fraction");
    prob(protected_fraction, "protected_fraction");
    prob(null_dacl_fraction, "null_dacl_fraction");
    prob(oi_probability, "oi_probability");
    prob(ci_probability, "ci_probability");
    prob(np_probability, "np_probability");
    prob(io_probability, "io_probability");
    if (folders < 1) throw InvalidParams("folders must be >= 1");
    if (users < 1) throw InvalidParams("users must be >= 1");
    if (max_depth < 1 && folders > 1) throw InvalidParams("max_depth must be >= 1 when folders > 1");
    if (min_aces > max_aces) throw InvalidParams("min_aces must not exceed max_aces");
}

GenParams verification_params(std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ull);
    auto between = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    GenParams p;
    p.seed = seed;
    p.folders = between(1, 200);
    p.max_depth = between(1, 6);
    p.users = between(1, 50);
    p.groups = between(0, 20);
    p.nesting_probability = 0.5;
    p.min_aces = 0;
    p.max_aces = between(1, 6);
    p.deny_fraction = 0.3;
    p.protected_fraction = 0.1;
    return p;
}

Snapshot gen_random(const GenParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    char buf[64];
    std::vector<Principal> principals;
    for (std::size_t u = 0; u < params.users; ++u) {
        std::snprintf(buf, sizeof buf, "GEN\\user%03zu", u + 1);
        principals.push_back({Sid::from_string("S-1-5-21-9-9-9-" + std::to_string(1000 + u)), buf,
                              PrincipalKind::User, {}, {}});
    }
    for (std::size_t g = 0; g < params.groups; ++g) {
        std::snprintf(buf, sizeof buf, "GEN\\group%02zu", g + 1);
        principals.push_back({Sid::from_string("S-1-5-21-9-9-9-" + std::to_string(5000 + g)), buf,
                              PrincipalKind::Group, {}, {}});
    }
    for (std::size_t g = 0; g < params.groups; ++g) {
        auto& group = principals[params.users + g];
        const std::size_t direct = 1 + pick(std::max<std::size_t>(1, params.users / 2));
        for (std::size_t k = 0; k < direct; ++k) {
            const Sid& sid = principals[pick(params.users)].sid;
            if (std::find(group.members.begin(), group.members.end(), sid) == group.members.end())
                group.members.push_back(sid);
        }
        for (std::size_t other = 0; other < params.groups; ++other) {
            if (other == g || !chance(params.nesting_probability / static_cast<double>(params.groups))) continue;
            group.members.push_back(principals[params.users + other].sid);
        }
    }

    // Rights drawn from the alias masks and from random atomic subsets.
    static constexpr std::uint32_t kAliasMasks[] = {0x1F01FF, 0x1301BF, 0x1200A9, 0x120089, 0x120116,
                                                    0x301BF,  0x200A9,  0x20089,  0x116,    0x10000};
    const auto atomics = atomic_rights();
    auto random_mask = [&]() {
        if (chance(0.5)) return AccessMask(kAliasMasks[pick(std::size(kAliasMasks))]);
        AccessMask m;
        while (m.empty()) {
            for (const auto r : atomics) {
                if (chance(0.3)) m |= right_mask(r);
            }
        }
        return m;
    };
    const std::size_t sid_choices = principals.size() + 1;  // + Everyone
    auto random_ace = [&]() {
        Ace ace;
        ace.type = chance(params.deny_fraction) ? AceType::Deny : AceType::Allow;
        const std::size_t who = pick(sid_choices);
        ace.sid = who == principals.size() ? well_known::kEveryone : principals[who].sid;
        ace.mask = random_mask();
        if (chance(params.oi_probability)) ace.flags.set(AceFlag::ObjectInherit);
        if (chance(params.ci_probability)) ace.flags.set(AceFlag::ContainerInherit);
        if (chance(params.np_probability)) ace.flags.set(AceFlag::NoPropagate);
        const bool inheritable = ace.flags.has(AceFlag::ObjectInherit) || ace.flags.has(AceFlag::ContainerInherit);
        if (inheritable && chance(params.io_probability)) ace.flags.set(AceFlag::InheritOnly);
        return ace;
    };
    auto random_sd = [&](bool is_root) {
        SecurityDescriptor sd;
        if (chance(params.null_dacl_fraction)) {
            sd.dacl = Dacl::null();
            return sd;
        }
        const std::size_t count = params.min_aces + pick(params.max_aces - params.min_aces + 1);
        for (std::size_t k = 0; k < count; ++k) sd.dacl.aces.push_back(random_ace());
        sd.dacl = canonicalize(sd.dacl);
        sd.is_protected = !is_root && chance(params.protected_fraction);
        return sd;
    };

    std::vector<FolderNode> flat;
    std::vector<std::size_t> depth;
    flat.push_back({"C:/Root", random_sd(true), {}});
    depth.push_back(0);
    std::vector<std::size_t> open{0};  // folders that may take children
    while (flat.size() < params.folders) {
        const std::size_t parent = open[pick(open.size())];
        std::snprintf(buf, sizeof buf, "/f%04zu", flat.size());
        flat.push_back({flat[parent].path + buf, random_sd(false), {}});
        depth.push_back(depth[parent] + 1);
        if (depth.back() < params.max_depth) open.push_back(flat.size() - 1);
    }

    Snapshot snapshot;
    snapshot.directory = Directory("GEN", std::move(principals));
    snapshot.root = build_folder_tree(std::move(flat));
    return snapshot;
}

Snapshot materialize(const Snapshot& snapshot) {
    Snapshot out = snapshot;
    std::function<void(FolderNode&, const EffectiveDacl*, std::size_t)> visit =
        [&](FolderNode& node, const EffectiveDacl* parent, std::size_t depth) {
            const EffectiveDacl effective =
                parent ? propagate_step(*parent, node.sd, node.path, depth) : root_effective_dacl(node.sd, node.path);
            if (effective.present) {
                node.sd.dacl.aces.clear();
                for (const auto& e : effective.aces) node.sd.dacl.aces.push_back(e.ace);
            }
            for (auto& child : node.children) visit(child, &effective, depth + 1);
        };
    visit(out.root, nullptr, 0);
    return out;
}

}  // namespace aclaudit
