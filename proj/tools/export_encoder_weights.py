#!/usr/bin/env python3
"""Convert a standard pretrained BERT-style checkpoint directory into the
backend format the pipeline loads: config.kv, vocab.txt, and weights.nstf.

Input: a directory holding config.json, vocab.txt, and either
model.safetensors or pytorch_model.bin, e.g. a bert-base-uncased download.

    python3 tools/export_encoder_weights.py --input ~/bert-base-uncased --out weights/
    negscope train --backend pretrained-base-uncased,dir=weights/ ...
"""

import argparse
import json
import shutil
import struct
import sys
from pathlib import Path

import numpy as np

KEEP_PREFIXES = ("embeddings.", "encoder.layer.")


def load_state_dict(input_dir: Path):
    st = input_dir / "model.safetensors"
    if st.exists():
        from safetensors.numpy import load_file

        return load_file(str(st))
    bin_path = input_dir / "pytorch_model.bin"
    if bin_path.exists():
        import torch

        state = torch.load(str(bin_path), map_location="cpu", weights_only=True)
        return {k: v.numpy() for k, v in state.items()}
    sys.exit(f"error: neither model.safetensors nor pytorch_model.bin in {input_dir}")


def write_nstf(path: Path, tensors: dict):
    with open(path, "wb") as out:
        out.write(b"NSTF")
        out.write(struct.pack("<II", 1, len(tensors)))
        for name, arr in tensors.items():
            arr = np.ascontiguousarray(arr, dtype="<f4")
            encoded = name.encode("utf-8")
            out.write(struct.pack("<I", len(encoded)))
            out.write(encoded)
            out.write(struct.pack("<I", arr.ndim))
            for d in arr.shape:
                out.write(struct.pack("<Q", d))
            out.write(arr.tobytes())


def lower_case_setting(input_dir: Path) -> bool:
    tok_cfg = input_dir / "tokenizer_config.json"
    if tok_cfg.exists():
        with open(tok_cfg) as f:
            value = json.load(f).get("do_lower_case")
        if value is not None:
            return bool(value)
    name = input_dir.name.lower()
    if "uncased" in name:
        return True
    if "cased" in name:
        return False
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True, help="pretrained checkpoint directory")
    ap.add_argument("--out", required=True, help="backend weights directory to create")
    args = ap.parse_args()

    input_dir = Path(args.input)
    out_dir = Path(args.out)
    config_path = input_dir / "config.json"
    vocab_path = input_dir / "vocab.txt"
    for p in (config_path, vocab_path):
        if not p.exists():
            sys.exit(f"error: missing {p}")

    with open(config_path) as f:
        hf = json.load(f)

    state = load_state_dict(input_dir)
    tensors = {}
    for name, arr in state.items():
        if name.startswith("bert."):
            name = name[len("bert.") :]
        if name.startswith(KEEP_PREFIXES):
            tensors[name] = arr
    if not tensors:
        sys.exit("error: no encoder tensors found in the checkpoint")

    out_dir.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(vocab_path, out_dir / "vocab.txt")

    kv = {
        "vocab_size": hf["vocab_size"],
        "hidden_size": hf["hidden_size"],
        "num_layers": hf["num_hidden_layers"],
        "num_heads": hf["num_attention_heads"],
        "intermediate_size": hf["intermediate_size"],
        "max_position": hf.get("max_position_embeddings", 512),
        "type_vocab_size": hf.get("type_vocab_size", 2),
        "layer_norm_eps": hf.get("layer_norm_eps", 1e-12),
        "lower_case": "true" if lower_case_setting(input_dir) else "false",
    }
    with open(out_dir / "config.kv", "w") as f:
        for key, value in kv.items():
            f.write(f"{key}={value}\n")

    write_nstf(out_dir / "weights.nstf", tensors)
    total = sum(int(np.prod(a.shape)) for a in tensors.values())
    print(f"wrote {len(tensors)} tensors ({total} parameters) to {out_dir}")


if __name__ == "__main__":
    main()
