#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hilim/check.hpp"
#include "hilim/instance.hpp"
#include "hilim/poset.hpp"

using namespace hilim;

namespace {

std::string format_limits(const std::vector<Index>& h) {
    if (h.empty()) return "H^*=0";
    std::ostringstream os;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (k) os << ' ';
        os << "H^" << k << '=' << h[k];
    }
    return os.str();
}

nlohmann::json limits_json(const std::vector<Index>& h) {
    nlohmann::json a = nlohmann::json::array();
    for (Index v : h) a.push_back(v);
    return a;
}

std::string format_dims(const std::vector<Index>& dims) {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k) os << ',';
        os << dims[k];
    }
    os << ']';
    return os.str();
}

struct ComputeOptions {
    std::string file;
    std::string method = "fibrant";
    std::string at;
    std::optional<int> cutoff;
    bool json = false;
};

int run_compute(const ComputeOptions& opt) {
    InstanceFile inst = InstanceFile::load(opt.file);
    return dispatch_field(inst.field, [&]<class Scalar>() {
        ModuleDiagram<Scalar> f = inst.build_diagram<Scalar>();
        std::optional<int> at;
        if (!opt.at.empty()) at = f.poset.index_of(opt.at);

        std::optional<std::vector<Index>> fibrant_h, oracle_h;
        nlohmann::json report;
        std::vector<std::string> report_lines;
        if (opt.method == "fibrant" || opt.method == "both") {
            FibrantReplacement<Scalar> r = fibrant_replacement<Scalar>(f, opt.cutoff);
            fibrant_h = higher_limits<Scalar>(r, at);
            for (int p = 0; p < f.poset.size(); ++p) {
                const auto& v = r.rf.value[static_cast<std::size_t>(p)];
                const char* tag = to_string(r.cases[static_cast<std::size_t>(p)]);
                report[f.poset.name(p)] = {{"case", tag},
                                           {"dims", limits_json(v.dims())},
                                           {"height", v.height()}};
                report_lines.push_back(f.poset.name(p) + ": case=" + tag +
                                       " dims=" + format_dims(v.dims()) +
                                       " height=" + std::to_string(v.height()));
            }
        }
        if (opt.method == "oracle" || opt.method == "both")
            oracle_h = oracle_higher_limits<Scalar>(f, at);
        if (opt.method == "both" && *fibrant_h != *oracle_h)
            throw InternalError(InternalError::Code::OracleDisagreement,
                                "fibrant route " + format_limits(*fibrant_h) +
                                    " != oracle route " + format_limits(*oracle_h));
        const std::vector<Index>& h = fibrant_h ? *fibrant_h : *oracle_h;

        if (opt.json) {
            nlohmann::json out;
            out["higher_limits"] = limits_json(h);
            out["method"] = opt.method;
            if (opt.method == "both") out["backends_agree"] = true;
            if (!opt.at.empty()) out["at"] = opt.at;
            if (!report.is_null()) out["replacement"] = report;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << format_limits(h);
            if (opt.method == "both") std::cout << "; backends agree";
            std::cout << "\n";
            for (const std::string& line : report_lines) std::cout << line << "\n";
        }
        return 0;
    });
}

int run_label(const std::string& file, const std::string& dot_path, bool json) {
    InstanceFile inst = InstanceFile::load(file);
    Poset poset = inst.build_poset();
    Labelling lab = labelling(poset);
    if (json) {
        nlohmann::json out;
        for (int p = 0; p < poset.size(); ++p)
            out["labels"][poset.name(p)] = lab.label[static_cast<std::size_t>(p)];
        out["sup_B"] = lab.sup_label;
        std::cout << out.dump(2) << "\n";
    } else {
        for (int p = 0; p < poset.size(); ++p)
            std::cout << poset.name(p) << ": B=" << lab.label[static_cast<std::size_t>(p)]
                      << "\n";
        std::cout << "sup B = " << lab.sup_label << "\n";
    }
    if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out)
            throw InputError(InputError::Code::ParseError, "cannot write " + dot_path);
        TreeDecomposition tree = maximal_tree(poset);
        out << to_dot(poset, &lab, &tree);
    }
    return 0;
}

int run_bounds(const std::string& file, int tree_trials, bool json) {
    InstanceFile inst = InstanceFile::load(file);
    return dispatch_field(inst.field, [&]<class Scalar>() {
        BoundsReport rep;
        if (inst.has_functor) {
            ModuleDiagram<Scalar> f = inst.build_diagram<Scalar>();
            rep = vanishing_bounds<Scalar>(f.poset, &f, tree_trials);
        } else {
            rep = vanishing_bounds(inst.build_poset(), tree_trials);
        }
        if (json) {
            nlohmann::json out;
            out["sup_B"] = rep.sup_b;
            out["max_degree"] = rep.max_degree;
            out["tree_bound"] = rep.tree_bound;
            out["removed_covers"] = rep.tree.removed_covers.size();
            if (rep.realized_height) out["realized_height"] = *rep.realized_height;
            for (const auto& [name, h] : rep.per_element_heights)
                out["heights"][name] = h;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "sup B = " << rep.sup_b << "\n"
                      << "length = " << rep.max_degree << "\n"
                      << "tree bound = " << rep.tree_bound << " (removed covers: "
                      << rep.tree.removed_covers.size() << ")\n";
            if (rep.realized_height)
                std::cout << "realized height = " << *rep.realized_height << "\n";
            for (const auto& [name, h] : rep.per_element_heights)
                std::cout << name << ": height=" << h << "\n";
        }
        return 0;
    });
}

struct CheckOptions {
    int trials = 25;
    std::uint64_t seed = 1;
    int max_elements = 8;
    int max_dim = 3;
    std::string field = "Q";
};

int run_check(const CheckOptions& opt) {
    RandomParams params;
    params.max_elements = opt.max_elements;
    params.max_dim = opt.max_dim;
    params.field = FieldSpec::parse(opt.field);
    CheckSummary summary = dispatch_field(params.field, [&]<class Scalar>() {
        return run_checks<Scalar>(opt.trials, opt.seed, params);
    });
    std::cout << "trials=" << summary.trials << " failures=" << summary.failures.size()
              << "\n";
    for (const CheckFailure& f : summary.failures)
        std::cout << "seed " << f.seed << ": " << f.what << "\n";
    std::cout << (summary.ok() ? "PASS" : "FAIL") << "\n";
    return summary.ok() ? 0 : 2;
}

int run_random(std::uint64_t seed, int max_elements, int max_dim, int atoms,
               const std::string& field, const std::string& out_path) {
    RandomParams params;
    params.max_elements = max_elements;
    params.max_dim = max_dim;
    params.atoms = atoms;
    params.field = FieldSpec::parse(field);
    dispatch_field(params.field, [&]<class Scalar>() {
        ModuleDiagram<Scalar> f = random_instance<Scalar>(seed, params);
        InstanceFile::from_diagram<Scalar>(f).save(out_path);
        return 0;
    });
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact higher limits of module diagrams on finite filtered posets"};
    app.require_subcommand(1);

    ComputeOptions copt;
    CLI::App* compute = app.add_subcommand("compute", "Higher-limit dimensions per degree");
    compute->add_option("file", copt.file, "instance file")->required();
    compute->add_option("--method", copt.method, "fibrant | oracle | both")
        ->check(CLI::IsMember({"fibrant", "oracle", "both"}));
    compute->add_option("--at", copt.at, "restrict to the strict down-set below this element");
    int cutoff_value = -1;
    CLI::Option* cutoff_opt =
        compute->add_option("--cutoff", cutoff_value, "truncation cutoff degree");
    compute->add_flag("--json", copt.json, "machine-readable output");

    std::string label_file, dot_path;
    bool label_json = false;
    CLI::App* label_cmd = app.add_subcommand("label", "Labelling function B and sup B");
    label_cmd->add_option("file", label_file, "instance or poset file")->required();
    label_cmd->add_option("--dot", dot_path, "write a DOT rendering");
    label_cmd->add_flag("--json", label_json, "machine-readable output");

    std::string bounds_file;
    int tree_trials = 0;
    bool bounds_json = false;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "Vanishing-bound report");
    bounds_cmd->add_option("file", bounds_file, "instance or poset file")->required();
    bounds_cmd->add_option("--tree-trials", tree_trials, "sampled maximal trees to try");
    bounds_cmd->add_flag("--json", bounds_json, "machine-readable output");

    CheckOptions kopt;
    CLI::App* check_cmd = app.add_subcommand("check", "Randomized differential testing");
    check_cmd->add_option("--trials", kopt.trials, "number of random instances");
    check_cmd->add_option("--seed", kopt.seed, "base seed");
    check_cmd->add_option("--max-elements", kopt.max_elements, "poset size limit");
    check_cmd->add_option("--max-dim", kopt.max_dim, "module dimension limit");
    check_cmd->add_option("--field", kopt.field, "Q or Fp:P");

    std::uint64_t rnd_seed = 1;
    int rnd_elements = 8, rnd_dim = 3, rnd_atoms = -1;
    std::string rnd_field = "Q", rnd_out;
    CLI::App* random_cmd = app.add_subcommand("random", "Emit a random instance file");
    random_cmd->add_option("--seed", rnd_seed, "seed");
    random_cmd->add_option("--max-elements", rnd_elements, "poset size limit");
    random_cmd->add_option("--max-dim", rnd_dim, "module dimension limit");
    random_cmd->add_option("--atoms", rnd_atoms, "number of indicator summands");
    random_cmd->add_option("--field", rnd_field, "Q or Fp:P");
    random_cmd->add_option("-o,--output", rnd_out, "output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) {
            if (cutoff_opt->count()) copt.cutoff = cutoff_value;
            return run_compute(copt);
        }
        if (label_cmd->parsed()) return run_label(label_file, dot_path, label_json);
        if (bounds_cmd->parsed()) return run_bounds(bounds_file, tree_trials, bounds_json);
        if (check_cmd->parsed()) return run_check(kopt);
        if (random_cmd->parsed())
            return run_random(rnd_seed, rnd_elements, rnd_dim, rnd_atoms, rnd_field, rnd_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
