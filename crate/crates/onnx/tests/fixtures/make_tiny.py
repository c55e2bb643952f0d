"""Writes a tiny masked-LM style ONNX graph over the demo vocabulary.

Usage: python make_tiny.py <out_dir>
"""
import hashlib
import pathlib
import shutil
import sys

import torch

HERE = pathlib.Path(__file__).resolve().parent
VOCAB = HERE.parents[2] / "core" / "data" / "vocab_demo.txt"


class TinyMlm(torch.nn.Module):
    def __init__(self, vocab_size, width=8):
        super().__init__()
        self.embed = torch.nn.Embedding(vocab_size, width)
        self.mix = torch.nn.Linear(width, width)
        self.head = torch.nn.Linear(width, vocab_size)

    def forward(self, input_ids, attention_mask):
        h = self.embed(input_ids)
        mask = attention_mask.unsqueeze(-1).to(h.dtype)
        context = (h * mask).sum(dim=1, keepdim=True) / mask.sum(dim=1, keepdim=True)
        return self.head(torch.tanh(h + self.mix(context)))


def write_reference(model, vocab, path):
    pieces = ["She", "will", "[MASK]", "him", "."]
    ids = [vocab.index("[CLS]")] + [vocab.index(p) for p in pieces] + [vocab.index("[SEP]")]
    ids = torch.tensor([ids], dtype=torch.int64)
    with torch.no_grad():
        logits = model(ids, torch.ones_like(ids))[0, 3].double()
    probs = torch.softmax(logits, dim=-1)
    top = torch.argsort(probs, descending=True)[:5]
    path.write_text("".join(f"{vocab[i]}\t{probs[i].item():.9f}\n" for i in top.tolist()))


def main():
    out = pathlib.Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    vocab = VOCAB.read_text().splitlines()
    torch.manual_seed(0)
    model = TinyMlm(len(vocab)).eval()
    ids = torch.tensor([[2, 5, 4, 3]], dtype=torch.int64)
    torch.onnx.export(
        model,
        (ids, torch.ones_like(ids)),
        out / "model.onnx",
        input_names=["input_ids", "attention_mask"],
        output_names=["logits"],
        dynamic_axes={"input_ids": {0: "batch", 1: "seq"},
                      "attention_mask": {0: "batch", 1: "seq"},
                      "logits": {0: "batch", 1: "seq"}},
        opset_version=14,
        dynamo=False,
    )
    shutil.copyfile(VOCAB, out / "vocab.txt")
    write_reference(model, vocab, out / "reference.tsv")
    lines = []
    for name in ("model.onnx", "vocab.txt"):
        digest = hashlib.sha256((out / name).read_bytes()).hexdigest()
        lines.append(f"{digest}  {name}\n")
    (out / "digests.txt").write_text("".join(lines))


if __name__ == "__main__":
    main()
