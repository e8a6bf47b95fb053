"""Runs the lucent tool over the net corpus and validates every JSON output
against the schemas in schemas/."""

import argparse
import json
import pathlib
import subprocess
import sys

import jsonschema
import referencing


def load_registry(schema_dir):
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        schema = json.loads(path.read_text())
        resources.append((path.name, referencing.Resource.from_contents(schema)))
    return referencing.Registry().with_resources(resources)


def run(tool, args):
    proc = subprocess.run([tool, *args, "--format", "json"], capture_output=True, text=True)
    if proc.returncode not in (0, 1, 3):
        raise RuntimeError(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr.strip()}")
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("tool")
    parser.add_argument("--schemas", type=pathlib.Path, required=True)
    parser.add_argument("--nets", type=pathlib.Path, required=True)
    opts = parser.parse_args()

    registry = load_registry(opts.schemas)

    def validator(name):
        schema = registry.contents(name)
        return jsonschema.Draft202012Validator(schema, registry=registry)

    validators = {name: validator(f"{name}.schema.json")
                  for name in ("analysis", "lucency", "exhaustion", "certificate", "verify")}

    failures = 0
    documents = 0
    for net in sorted(opts.nets.glob("*.net")):
        cluster = next(line.split()[1] for line in net.read_text().splitlines()
                       if line.startswith("place "))
        jobs = [
            ("analysis", ["analyze", str(net)]),
            ("analysis", ["analyze", str(net), "--cap", "2"]),
            ("lucency", ["lucency", str(net)]),
            ("lucency", ["lucency", str(net), "--cap", "2"]),
            ("certificate", ["prove", str(net), "--cluster", cluster]),
            ("verify", ["verify", str(net)]),
            ("exhaustion", ["exhaust", str(net), "--cluster", cluster]),
        ]
        for schema, args in jobs:
            try:
                document = run(opts.tool, args)
            except (RuntimeError, json.JSONDecodeError) as exc:
                # A net without an exhaustion reports on stderr only.
                if schema == "exhaustion":
                    continue
                print(f"{net.name}: {exc}")
                failures += 1
                continue
            documents += 1
            errors = list(validators[schema].iter_errors(document))
            for error in errors:
                print(f"{net.name} {args[0]}: {error.json_path}: {error.message}")
            failures += bool(errors)

    print(f"{documents} documents validated, {failures} failures")
    return 1 if failures or documents == 0 else 0


if __name__ == "__main__":
    sys.exit(main())
