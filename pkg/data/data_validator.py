"""Validate and load whitespace-tokenized parallel corpora."""

import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from trace_core import Sentence, TokenError, split_line

logger = logging.getLogger(__name__)


class CorpusError(ValueError):
    """Corpus files are missing, unreadable or not parallel."""


class CorpusValidator:
    """Check a source file against one or more reference files."""

    def read_sentences(self, path) -> List[Sentence]:
        """
        Read one sentence per line.

        Raises:
            CorpusError: missing file, empty line or reserved token
        """
        path = Path(path)
        if not path.exists():
            raise CorpusError(f"Corpus file not found: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                lines = f.read().split("\n")
        except (OSError, UnicodeDecodeError) as e:
            raise CorpusError(f"Cannot read {path}: {e}") from e
        if lines and lines[-1] == "":
            lines.pop()

        sentences = []
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                raise CorpusError(f"{path}:{number}: empty line")
            try:
                sentences.append(split_line(line))
            except TokenError as e:
                raise CorpusError(f"{path}:{number}: {e}") from e
        return sentences

    def validate_corpus(self, source_path, reference_paths: Sequence) -> Dict:
        """
        Validate a parallel corpus without raising.

        Returns:
            Dictionary with 'valid', 'issues', 'warnings' and 'stats'
        """
        results = {
            'valid': True,
            'issues': [],
            'warnings': [],
            'stats': {}
        }
        if not reference_paths:
            results['valid'] = False
            results['issues'].append("No reference files given")
            return results

        try:
            sources = self.read_sentences(source_path)
            references = [self.read_sentences(p) for p in reference_paths]
        except CorpusError as e:
            results['valid'] = False
            results['issues'].append(str(e))
            return results

        if not sources:
            results['valid'] = False
            results['issues'].append("Source file is empty")

        for path, refs in zip(reference_paths, references):
            if len(refs) != len(sources):
                results['valid'] = False
                results['issues'].append(
                    f"Line-count mismatch: {source_path} has {len(sources)} lines, {path} has {len(refs)}"
                )

        if sources:
            lengths = [len(s) for s in sources]
            results['stats']['sentences'] = len(sources)
            results['stats']['source_tokens'] = sum(lengths)
            results['stats']['min_len'] = min(lengths)
            results['stats']['max_len'] = max(lengths)
            if max(lengths) > 200:
                results['warnings'].append(f"Very long sentence ({max(lengths)} tokens)")

        logger.info(f"Corpus validation: {'✓' if results['valid'] else '✗'}")
        return results

    def load_corpus(self, source_path, reference_paths: Sequence) -> Tuple[List[Sentence], List[List[Sentence]]]:
        """
        Load a parallel corpus.

        Returns:
            (source sentences, one reference stream per reference file)
        """
        report = self.validate_corpus(source_path, reference_paths)
        if not report['valid']:
            raise CorpusError("; ".join(report['issues']))
        sources = self.read_sentences(source_path)
        references = [self.read_sentences(p) for p in reference_paths]
        logger.info(f"Loaded {len(sources)} sentences with {len(references)} reference set(s)")
        return sources, references
