import pytest

from stylecast.corpus import build_vocabulary
from stylecast.synthetic import two_topic_corpus
from stylecast.topic import TopicConfig, train_lda


@pytest.fixture(scope="session")
def two_topic():
    """The 200-comment, two-disjoint-topic synthetic corpus with its K=2 model."""
    corpus, labels = two_topic_corpus(200, mix=0.5, seed=0)
    vocab = build_vocabulary(corpus, min_freq=1)
    model = train_lda(corpus, vocab, TopicConfig(K=2, iterations=1000, seed=0))
    return corpus, labels, vocab, model


@pytest.fixture(scope="session")
def mix_70_30():
    corpus, labels = two_topic_corpus(200, mix=0.7, seed=1)
    vocab = build_vocabulary(corpus, min_freq=1)
    model = train_lda(corpus, vocab, TopicConfig(K=2, iterations=1000, seed=1))
    return corpus, labels, vocab, model
