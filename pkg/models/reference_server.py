#!/usr/bin/env python3
"""
Serve a LookaheadTransducerModel over the newline-JSON model protocol.

Usage:
    python models/reference_server.py --model-file data/synthetic/model.json [--sharpness 0.7]

Also a template for wrapping a real translation system behind the same protocol.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models.factory import load_model_file
from models.incremental_model import ModelError, UnknownTokenError
from models.lookahead_transducer import build_lookahead_model

logger = logging.getLogger(__name__)


def handle_request(model, line: str) -> dict:
    """Answer one request line."""
    try:
        request = json.loads(line)
        src = request["src"]
        tgt = request["tgt"]
        top_k = int(request.get("top_k", 10))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        return {"error": f"bad request: {e}"}

    try:
        distribution = model.next_distribution(tuple(src), tuple(tgt))
    except UnknownTokenError as e:
        return {"error": str(e), "token": e.token}
    except ModelError as e:
        return {"error": str(e)}

    entries = distribution.entries[:max(top_k, 1)]
    return {
        "tokens": [token for token, _ in entries],
        "logprobs": [math.log(p) for _, p in entries],
    }


def serve(model, stdin=sys.stdin, stdout=sys.stdout) -> int:
    """Answer requests until stdin closes; returns the number served."""
    served = 0
    for line in stdin:
        if not line.strip():
            continue
        stdout.write(json.dumps(handle_request(model, line), ensure_ascii=False) + "\n")
        stdout.flush()
        served += 1
    return served


def main() -> int:
    parser = argparse.ArgumentParser(description="Reference model server")
    parser.add_argument('--model-file', required=True, help='model.json written by `run_sweeps.py gen`')
    parser.add_argument('--sharpness', type=float, help='Override q')
    parser.add_argument('--lookahead', type=int, help='Override d')
    args = parser.parse_args()

    # stdout carries the protocol; logs go to stderr
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    params = load_model_file(args.model_file)
    if args.sharpness is not None:
        params['sharpness'] = args.sharpness
    if args.lookahead is not None:
        params['lookahead'] = args.lookahead
    model = build_lookahead_model(params)
    serve(model)
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
